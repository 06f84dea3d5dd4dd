//! Exhaustive antisymmetry/Jacobi sweeps over a window. Pair and triple
//! checks are independent, so the triple scan fans out across threads and
//! the violation lists merge back in input order.

use crate::algebra::{antisymmetry_residual, jacobi_residual, AlgebraInstance, BasisVector};
use crate::derivation::Window;

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub antisymmetry_violations: Vec<(BasisVector, BasisVector)>,
    pub jacobi_violations: Vec<(BasisVector, BasisVector, BasisVector)>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.antisymmetry_violations.is_empty() && self.jacobi_violations.is_empty()
    }
}

/// Checks super-antisymmetry on every unordered pair and the super-Jacobi
/// identity on every unordered triple of window basis vectors.
pub fn identity_sweep(inst: &AlgebraInstance, window: Window) -> SweepReport {
    let pairs = window.pairs(inst);
    let antisymmetry_violations: Vec<_> = pairs
        .iter()
        .filter(|(x, y)| !antisymmetry_residual(inst, x, y).is_zero())
        .copied()
        .collect();

    let triples = window.triples(inst);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(triples.len().max(1));
    let chunk_size = triples.len().div_ceil(workers).max(1);
    let jacobi_violations = std::thread::scope(|scope| {
        let handles: Vec<_> = triples
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .filter(|(x, y, z)| !jacobi_residual(inst, x, y, z).is_zero())
                        .copied()
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all = Vec::new();
        for handle in handles {
            all.extend(handle.join().expect("sweep worker panicked"));
        }
        all
    });

    SweepReport {
        pairs_checked: pairs.len(),
        triples_checked: triples.len(),
        antisymmetry_violations,
        jacobi_violations,
    }
}
