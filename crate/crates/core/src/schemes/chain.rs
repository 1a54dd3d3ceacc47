use std::collections::BTreeMap;

use super::{CoverScheme, RowPool};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, Eliminator};
use crate::verify::Decomposer;

/// Prefix-sum construction for `k = 2`.
///
/// Each chain `(i_1, ..., i_r)` contributes rows `a_1 = g_{i_1}` and
/// `a_j = a_{j-1} + g_{i_j}`, so `g_{i_1}` is witnessed by `a_1` and every
/// later `g_{i_j}` by `{a_{j-1}, a_j}`. Rows of `g` outside every chain must
/// be reachable from at most two of the emitted rows (for the element left
/// out of a circuit this is the last prefix sum). Equal rows emitted by
/// different chains are merged.
pub fn chain_cover(g: &BitMatrix, chains: &[Vec<usize>]) -> Result<CoverScheme> {
    let mut in_chain = vec![false; g.len()];
    for &i in chains.iter().flatten() {
        if i >= g.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rows: g.len(),
            });
        }
        if std::mem::replace(&mut in_chain[i], true) {
            return Err(Error::InvalidParameter(format!(
                "row {} appears in two chain positions",
                i + 1
            )));
        }
        if g.row(i).is_zero() {
            return Err(Error::ZeroRow(i));
        }
    }

    let mut pool = RowPool::default();
    let mut witnesses = BTreeMap::new();
    for chain in chains {
        let mut acc = BitVec::zeros(g.dim());
        let mut prev: Option<usize> = None;
        for &i in chain {
            acc.xor_assign(g.row(i));
            if acc.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "chain prefix ending at row {} sums to zero",
                    i + 1
                )));
            }
            let cur = pool.intern(acc.clone());
            let mut w: Vec<usize> = prev.into_iter().chain(std::iter::once(cur)).collect();
            w.sort_unstable();
            witnesses.insert(i, w);
            prev = Some(cur);
        }
    }

    let a_k = pool.into_matrix(g.dim());
    let rest: Vec<usize> = (0..g.len()).filter(|&i| !in_chain[i]).collect();
    if !rest.is_empty() {
        let decomposer = Decomposer::new(&a_k, 2);
        for i in rest {
            match decomposer.find(g.row(i))? {
                Some(w) if !w.is_empty() => {
                    witnesses.insert(i, w);
                }
                _ => return Err(Error::ChainUncovered(i)),
            }
        }
    }
    Ok(CoverScheme::new(2, a_k, witnesses))
}

/// Finds a basis ordering under which every other row of `g` is a prefix sum.
///
/// A basis is chosen greedily in row order. Each remaining row is expressed
/// in that basis; basis rows are ranked by how many of those expressions use
/// them (most first, ties by row order). If every expression is a prefix of
/// the ranking, the ranking is returned as row indices of `g`, ready for
/// [`chain_cover`]; otherwise `None`.
pub fn nested_chain_order(g: &BitMatrix) -> Option<Vec<usize>> {
    let mut elim = Eliminator::new(g.dim(), g.len());
    let mut basis = Vec::new();
    let mut dependents = Vec::new();
    for (i, row) in g.rows().iter().enumerate() {
        match elim.insert(row) {
            None => basis.push(i),
            Some(_) => dependents.push(i),
        }
    }
    // Express dependents over the basis only: insert basis rows into a fresh eliminator.
    let mut basis_elim = Eliminator::new(g.dim(), basis.len());
    for &b in &basis {
        basis_elim.insert(g.row(b));
    }
    let inbound: Vec<Vec<usize>> = dependents
        .iter()
        .map(|&d| {
            basis_elim
                .express(g.row(d))
                .expect("dependent row lies in the span")
        })
        .collect();
    let mut degree = vec![0usize; basis.len()];
    for set in &inbound {
        for &u in set {
            degree[u] += 1;
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(degree[u]), u));
    let mut rank = vec![0usize; basis.len()];
    for (pos, &u) in order.iter().enumerate() {
        rank[u] = pos;
    }
    let nested = inbound
        .iter()
        .all(|set| set.iter().all(|&u| rank[u] < set.len()));
    nested.then(|| order.into_iter().map(|u| basis[u]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_cover;

    fn two_chain_instance() -> BitMatrix {
        BitMatrix::from_strs(&[
            "100000", "010000", "001000", "000100", "000010", "000001", "111100", "110000",
            "111000",
        ])
    }

    #[test]
    fn reproduces_the_two_chain_example() {
        let g = two_chain_instance();
        let s = chain_cover(&g, &[vec![0, 1, 2, 3], vec![4, 5]]).unwrap();
        let rows: Vec<String> = s.a_k().rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(
            rows,
            ["100000", "110000", "111000", "111100", "000010", "000011"]
        );
        assert_eq!(s.witness(6).unwrap(), &[3]);
        assert_eq!(s.witness(7).unwrap(), &[1]);
        assert_eq!(s.witness(8).unwrap(), &[2]);
        assert_eq!(s.witness(5).unwrap(), &[4, 5]);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn circuit_left_out_element() {
        let g = BitMatrix::from_strs(&["100", "010", "110"]);
        let s = chain_cover(&g, &[vec![0, 1]]).unwrap();
        assert_eq!(s.a_k(), &BitMatrix::from_strs(&["100", "110"]));
        assert_eq!(s.witness(2).unwrap(), &[1]);
    }

    #[test]
    fn single_row() {
        let g = BitMatrix::from_strs(&["101"]);
        let s = chain_cover(&g, &[vec![0]]).unwrap();
        assert_eq!(s.t_k(), 1);
        assert_eq!(s.witness(0).unwrap(), &[0]);
    }

    #[test]
    fn uncovered_row_is_an_error() {
        let g = BitMatrix::from_strs(&["1000", "0100", "0010", "0001", "1111"]);
        assert!(matches!(
            chain_cover(&g, &[vec![0], vec![1], vec![2], vec![3]]),
            Err(Error::ChainUncovered(4))
        ));
        assert!(chain_cover(&g, &[vec![0, 0]]).is_err());
        assert!(chain_cover(&g, &[vec![7]]).is_err());
    }

    #[test]
    fn nested_order_for_two_chain_instance() {
        let g = two_chain_instance();
        let order = nested_chain_order(&g).unwrap();
        assert_eq!(&order[..4], &[0, 1, 2, 3]);
        let s = chain_cover(&g, &[order]).unwrap();
        assert_eq!(s.t_k(), 6);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn non_nested_instance() {
        let g = BitMatrix::from_strs(&["100", "010", "001", "110", "011"]);
        assert!(nested_chain_order(&g).is_none());
    }
}
