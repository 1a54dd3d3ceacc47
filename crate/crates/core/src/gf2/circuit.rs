//! Circuits (minimal dependent row sets) of the binary matroid spanned by
//! the rows of a [`BitMatrix`].

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::matrix::Eliminator;
use crate::gf2::BitMatrix;

/// A minimal linearly dependent set of row indices, sorted ascending.
///
/// Over GF(2) the indexed rows sum to zero and every proper subset is
/// independent. A zero row on its own is a circuit of size one (a loop);
/// any other circuit has at least two members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    indices: Vec<usize>,
}

impl Circuit {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn is_dependent(m: &BitMatrix, indices: &[usize]) -> bool {
    m.select(indices).rank() < indices.len()
}

/// First dependency met when scanning rows in order, or `None` if the rows
/// are independent. The returned indices are sorted and their rows XOR to
/// zero.
pub fn find_dependency(m: &BitMatrix) -> Option<Vec<usize>> {
    let mut elim = Eliminator::new(m.dim(), m.len());
    for (i, row) in m.rows().iter().enumerate() {
        if let Some(mut combo) = elim.insert(row) {
            combo.push(i);
            return Some(combo);
        }
    }
    None
}

/// Shrinks a zero-sum index set to a circuit.
///
/// Candidates are tried for removal from the highest index down, so the
/// result keeps the earliest rows possible.
pub fn minimize_to_circuit(m: &BitMatrix, dep: &[usize]) -> Result<Circuit> {
    let mut current: Vec<usize> = dep.to_vec();
    current.sort_unstable();
    current.dedup();
    if let Some(&bad) = current.iter().find(|&&i| i >= m.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            rows: m.len(),
        });
    }
    if current.is_empty() || !m.sum_rows(&current).is_zero() {
        return Err(Error::NotDependent);
    }
    let mut pos = current.len();
    while pos > 0 {
        pos -= 1;
        let removed = current.remove(pos);
        if !is_dependent(m, &current) {
            current.insert(pos, removed);
        }
    }
    Ok(Circuit { indices: current })
}

/// Looks for a small circuit among the rows of `m`.
///
/// The first attempt scans rows in matrix order; each of the remaining
/// `trials - 1` attempts scans a random permutation drawn from `rng`. The
/// first dependency of each scan is minimized, and the smallest circuit over
/// all attempts is returned (earliest attempt wins ties). With `trials == 1`
/// the rng is never touched.
pub fn find_small_circuit<R: Rng + ?Sized>(
    m: &BitMatrix,
    trials: usize,
    rng: &mut R,
) -> Option<Circuit> {
    let first = find_dependency(m)?;
    let mut best = minimize_to_circuit(m, &first).expect("dependency sums to zero");
    let mut order: Vec<usize> = (0..m.len()).collect();
    for _ in 1..trials {
        if best.len() <= 2 {
            break;
        }
        order.shuffle(rng);
        let shuffled = m.select(&order);
        let dep = find_dependency(&shuffled).expect("permutation keeps dependence");
        let mut original: Vec<usize> = dep.iter().map(|&i| order[i]).collect();
        original.sort_unstable();
        let circuit = minimize_to_circuit(m, &original).expect("dependency sums to zero");
        if circuit.len() < best.len() {
            best = circuit;
        }
    }
    Some(best)
}
