use thiserror::Error;

use crate::syntax::{Atom, Formula};

pub const DEFAULT_ATOM_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TautologyError {
    #[error("formula has {count} distinct atoms; the truth-table cap is {cap}")]
    TooManyAtoms { count: usize, cap: usize },
}

/// Truth-table check treating each distinct atom as a propositional variable.
pub fn is_tautology(f: &Formula) -> Result<bool, TautologyError> {
    is_tautology_capped(f, DEFAULT_ATOM_CAP)
}

pub fn is_tautology_capped(f: &Formula, cap: usize) -> Result<bool, TautologyError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let count = atoms.len();
    if count > cap || count >= 64 {
        return Err(TautologyError::TooManyAtoms { count, cap });
    }
    let all_true = (0..1u64 << count).all(|assignment| {
        f.evaluate_with(&mut |atom| {
            let idx = atoms.binary_search(atom).expect("atom collected above");
            assignment >> idx & 1 == 1
        })
    });
    Ok(all_true)
}
