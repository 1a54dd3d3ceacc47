use std::collections::BTreeMap;

use rand::Rng;

use super::{is_trivial, CoverScheme, RowPool};
use crate::error::{Error, Result};
use crate::gf2::{find_small_circuit, BitMatrix, BitVec};

/// One round of successive circuit removal (`k = 2`).
///
/// While the remaining rows are dependent, a small circuit `c_0 < ... < c_r`
/// is found and replaced by the prefix sums of `c_0..c_{r-1}`; `c_r` equals
/// the last prefix sum. Rows left over at the end are copied verbatim.
///
/// Returns the new matrix and, for every input row, the one or two output
/// rows that sum to it.
pub fn scr_round<R: Rng + ?Sized>(
    m: &BitMatrix,
    trials: usize,
    rng: &mut R,
) -> (BitMatrix, Vec<Vec<usize>>) {
    let mut residual: Vec<usize> = (0..m.len()).collect();
    let mut pool = RowPool::default();
    let mut map = vec![Vec::new(); m.len()];
    loop {
        let sub = m.select(&residual);
        let Some(circuit) = find_small_circuit(&sub, trials, rng) else {
            break;
        };
        let members: Vec<usize> = circuit.indices().iter().map(|&i| residual[i]).collect();
        let (last, chain) = members.split_last().expect("circuits are nonempty");
        let mut acc = BitVec::zeros(m.dim());
        let mut prev = None;
        for &i in chain {
            acc.xor_assign(m.row(i));
            let cur = pool.intern(acc.clone());
            map[i] = match prev {
                None => vec![cur],
                Some(p) => sorted_pair(p, cur),
            };
            prev = Some(cur);
        }
        map[*last] = vec![prev.expect("circuits of distinct nonzero rows have >= 3 members")];
        residual.retain(|i| !members.contains(i));
    }
    for i in residual {
        map[i] = vec![pool.intern(m.row(i).clone())];
    }
    (pool.into_matrix(m.dim()), map)
}

fn sorted_pair(a: usize, b: usize) -> Vec<usize> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

/// Symmetric difference of sorted index lists: a row used twice cancels.
fn xor_expand(w: &[usize], map: &[Vec<usize>]) -> Vec<usize> {
    let mut counts: BTreeMap<usize, bool> = BTreeMap::new();
    for &j in w {
        for &o in &map[j] {
            let e = counts.entry(o).or_insert(false);
            *e = !*e;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, odd)| odd)
        .map(|(i, _)| i)
        .collect()
}

/// Successive circuit removal applied `q` times, giving `k = 2^q`.
///
/// Each round is [`scr_round`] on the previous round's output; witnesses are
/// composed across rounds so every row of `g` is reached with at most `2^q`
/// rows of the final matrix. `trials` is the number of row orders tried by
/// the circuit finder per removal (the first is always matrix order).
pub fn scr<R: Rng + ?Sized>(
    g: &BitMatrix,
    q: u32,
    trials: usize,
    rng: &mut R,
) -> Result<CoverScheme> {
    g.check_nonzero_distinct()?;
    if q >= usize::BITS {
        return Err(Error::InvalidParameter(format!("q={q} is too large")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let k = 1usize << q;
    if is_trivial(g) {
        return Ok(CoverScheme::uncoded(g, k));
    }
    let mut current = g.clone();
    let mut witnesses: Vec<Vec<usize>> = (0..g.len()).map(|i| vec![i]).collect();
    for _ in 0..q {
        let (next, map) = scr_round(&current, trials, rng);
        let unchanged =
            next.len() == current.len() && map.iter().enumerate().all(|(i, m)| m == &[i]);
        for w in witnesses.iter_mut() {
            *w = xor_expand(w, &map);
        }
        current = next;
        if unchanged {
            break;
        }
    }
    Ok(CoverScheme::new(
        k,
        current,
        witnesses.into_iter().enumerate().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::scr_bounds;
    use crate::verify::verify_cover;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn three_circuits() -> BitMatrix {
        BitMatrix::from_strs(&[
            "100000", "010000", "110000", "001000", "000100", "001100", "000010", "000001",
            "000011",
        ])
    }

    #[test]
    fn disjoint_triangles_hit_best_case() {
        let g = three_circuits();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = scr(&g, 1, 3, &mut rng).unwrap();
        assert_eq!(s.t_k() as u64, scr_bounds(9, 6, 1).best);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn second_round_keeps_cover() {
        let g = three_circuits();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = scr(&g, 2, 3, &mut rng).unwrap();
        assert!(s.t_k() <= 6);
        assert_eq!(s.k(), 4);
        assert!(s.max_witness_size() <= 4);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn independent_rows_pass_through() {
        let g = BitMatrix::from_strs(&["1100", "0110", "0011"]);
        for q in 1..4 {
            let s = scr(&g, q, 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            assert_eq!(s.a_k(), &g);
            assert!(s.witnesses().iter().all(|(i, w)| w == &[*i]));
        }
    }

    #[test]
    fn witness_expansion_cancels_repeats() {
        let map = vec![vec![0, 1], vec![1, 2]];
        assert_eq!(xor_expand(&[0, 1], &map), vec![0, 2]);
    }

    #[test]
    fn rejects_bad_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(scr(&BitMatrix::from_strs(&["10", "00"]), 1, 1, &mut rng).is_err());
        assert!(scr(&BitMatrix::from_strs(&["10", "10"]), 1, 1, &mut rng).is_err());
    }

    #[test]
    fn random_instances_stay_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let t = rng.gen_range(3..=7);
            let n = rng.gen_range(t..(1usize << t).min(40));
            let mut vals: Vec<u64> = (1..(1u64 << t)).collect();
            rand::seq::SliceRandom::shuffle(vals.as_mut_slice(), &mut rng);
            let rows = vals[..n]
                .iter()
                .map(|&v| BitVec::from_msb_value(t, v))
                .collect();
            let g = BitMatrix::from_rows(t, rows).unwrap();
            for q in 1..=2 {
                let s = scr(&g, q, 2, &mut rng).unwrap();
                let report = verify_cover(&s, &g).unwrap();
                assert!(report.ok, "{report}");
                assert!(s.t_k() <= n && s.t_k() >= g.rank());
                assert!(s.t_k() as u64 <= scr_bounds(n as u64, t as u64, q).worst);
            }
        }
    }
}
