use std::collections::VecDeque;
use std::fmt::Write;

use super::{CensusError, FiniteGroupTable};
use crate::exec::Execution;
use crate::ring::Ideal;

/// BFS minima for one `(sigma, target)` pair. `None` means unreachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthRow {
    pub sigma_index: usize,
    pub target: (usize, usize),
    pub min_ops: Option<u32>,
    pub min_len: Option<u32>,
}

fn bfs(start: &[usize], order: usize, mut next: impl FnMut(usize, &mut Vec<usize>)) -> Vec<Option<u32>> {
    let mut dist = vec![None; order];
    let mut queue = VecDeque::new();
    for &s in start {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    let mut buf = Vec::new();
    while let Some(g) = queue.pop_front() {
        let d = dist[g].expect("visited");
        buf.clear();
        next(g, &mut buf);
        for &h in &buf {
            if dist[h].is_none() {
                dist[h] = Some(d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}

fn min_over(dist: &[Option<u32>], targets: &[usize]) -> Option<u32> {
    targets.iter().filter_map(|&t| dist[t]).min()
}

/// Exact minimal number of q-operations, and minimal word length in the
/// conjugates `s sigma^{±1} s^-1` (`s` in `E(n, R, q)`), needed to reach a
/// nontrivial element of `E_ij(q)` for each target.
pub fn width_bfs(
    table: &FiniteGroupTable,
    sigma: usize,
    q: &Ideal,
    targets: &[(usize, usize)],
) -> Result<Vec<WidthRow>, CensusError> {
    let e = table.elementary_subgroup(q)?;
    width_with_subgroup(table, sigma, q, &e, targets)
}

fn width_with_subgroup(
    table: &FiniteGroupTable,
    sigma: usize,
    q: &Ideal,
    e: &[usize],
    targets: &[(usize, usize)],
) -> Result<Vec<WidthRow>, CensusError> {
    if table.is_central(sigma) {
        return Err(CensusError::CentralInput);
    }
    let g = table.element(sigma);
    if !g.minus_identity().iter().all(|x| q.contains(x).expect("same ring")) {
        return Err(CensusError::NotCongruent);
    }
    let order = table.order();
    let ops = bfs(&[sigma], order, |g, out| {
        for &s in e {
            out.push(table.conj(g, s));
            out.push(table.comm(g, s));
            out.push(table.comm(s, g));
        }
    });
    let si = table.inv(sigma);
    let mut letters: Vec<usize> = e
        .iter()
        .flat_map(|&s| [table.conj(sigma, s), table.conj(si, s)])
        .collect();
    letters.sort_unstable();
    letters.dedup();
    let words = bfs(&[table.identity()], order, |g, out| {
        out.extend(letters.iter().map(|&l| table.mul(g, l)));
    });
    Ok(targets
        .iter()
        .map(|&(i, j)| {
            let t = table.elementary_targets(i, j, q);
            WidthRow {
                sigma_index: sigma,
                target: (i, j),
                min_ops: min_over(&ops, &t),
                min_len: min_over(&words, &t),
            }
        })
        .collect())
}

/// Rows for every non-central element of `table`, plus the summary.
#[derive(Clone, Debug, PartialEq)]
pub struct WidthSummary {
    pub rows: Vec<WidthRow>,
    pub skipped_central: usize,
    pub skipped_noncongruent: usize,
}

impl WidthSummary {
    pub fn max_ops(&self) -> Option<u32> {
        self.rows.iter().filter_map(|r| r.min_ops).max()
    }

    pub fn max_len(&self) -> Option<u32> {
        self.rows.iter().filter_map(|r| r.min_len).max()
    }

    pub fn unreachable(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.min_ops.is_none() || r.min_len.is_none())
            .count()
    }

    fn mean(values: impl Iterator<Item = u32>) -> String {
        let (mut sum, mut count) = (0u64, 0u64);
        for v in values {
            sum += v as u64;
            count += 1;
        }
        if count == 0 {
            "none".into()
        } else {
            format!("{:.4}", sum as f64 / count as f64)
        }
    }

    /// `sigma_index,min_ops,min_len,target` rows, then a summary block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sigma_index,min_ops,min_len,target\n");
        let show = |v: Option<u32>| v.map_or("unreachable".to_string(), |v| v.to_string());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}:{}",
                r.sigma_index,
                show(r.min_ops),
                show(r.min_len),
                r.target.0,
                r.target.1
            );
        }
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"rows\": {},", self.rows.len());
        let _ = writeln!(out, "  \"skipped_central\": {},", self.skipped_central);
        let _ = writeln!(out, "  \"skipped_noncongruent\": {},", self.skipped_noncongruent);
        let _ = writeln!(out, "  \"unreachable\": {},", self.unreachable());
        let _ = writeln!(out, "  \"max_ops\": {},", show(self.max_ops()));
        let _ = writeln!(
            out,
            "  \"mean_ops\": {},",
            Self::mean(self.rows.iter().filter_map(|r| r.min_ops))
        );
        let _ = writeln!(out, "  \"max_len\": {},", show(self.max_len()));
        let _ = writeln!(
            out,
            "  \"mean_len\": {}",
            Self::mean(self.rows.iter().filter_map(|r| r.min_len))
        );
        let _ = writeln!(out, "}}");
        out
    }
}

/// [`width_bfs`] over every non-central element of `Gamma(q)`, all
/// off-diagonal targets. Each BFS is sequential; elements fan out over
/// `exec`.
pub fn width_census(table: &FiniteGroupTable, q: &Ideal, exec: Execution) -> Result<WidthSummary, CensusError> {
    let n = table.dim();
    let targets: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let e = table.elementary_subgroup(q)?;
    let gamma = table.congruence_subgroup(q);
    let skipped_noncongruent = table.order() - gamma.len();
    let sigmas: Vec<usize> = gamma.iter().copied().filter(|&k| !table.is_central(k)).collect();
    let skipped_central = gamma.len() - sigmas.len();
    // Build the product table once before fanning out.
    let _ = table.mul(0, 0);
    let per_sigma = exec.map(&sigmas, |&s| width_with_subgroup(table, s, q, &e, &targets));
    let mut rows = Vec::with_capacity(sigmas.len() * targets.len());
    for r in per_sigma {
        rows.extend(r?);
    }
    Ok(WidthSummary {
        rows,
        skipped_central,
        skipped_noncongruent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_sl;
    use crate::matrix::SqMatrix;
    use crate::ring::RingSpec;

    #[test]
    fn elementary_sigma_at_target() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let t = enumerate_sl(3, f2, 1000).unwrap();
        let q = Ideal::whole(f2);
        let g = SqMatrix::elementary(f2, 3, 1, 2, f2.one()).unwrap();
        let k = t.index_of(&g).unwrap();
        let rows = width_bfs(&t, k, &q, &[(1, 2)]).unwrap();
        assert_eq!(rows[0].min_ops, Some(0));
        assert_eq!(rows[0].min_len, Some(1));
        assert_eq!(
            width_bfs(&t, t.identity(), &q, &[(1, 2)]),
            Err(CensusError::CentralInput)
        );
    }

    #[test]
    fn sl2_f3_census() {
        let f3 = RingSpec::integers_mod(3).unwrap();
        let t = enumerate_sl(2, f3, 1000).unwrap();
        let s = width_census(&t, &Ideal::whole(f3), Execution::Sequential).unwrap();
        assert_eq!(s.skipped_central, 2);
        assert_eq!(s.rows.len(), 22 * 2);
        // [SL2(F3), SL2(F3)] is Q8 and holds no elementary matrix, so once a
        // commutator is taken the target is lost. Only the order-3 elements
        // get there (by at most one conjugation): 6 of order 4 and 8 of order 6 fail.
        assert_eq!(s.unreachable(), 28);
        for r in &s.rows {
            let g = t.element(r.sigma_index);
            let order3 = (t.mul(r.sigma_index, t.mul(r.sigma_index, r.sigma_index))) == t.identity();
            assert_eq!(r.min_ops.is_some(), order3, "{g:?}");
            assert!(r.min_ops.is_none_or(|k| k <= 1));
            // the normal closure is Q8 for order 4, everything otherwise
            let g2 = t.mul(r.sigma_index, r.sigma_index);
            assert_eq!(r.min_len.is_none(), t.is_central(g2));
        }
        let csv = s.to_csv();
        assert!(csv.starts_with("sigma_index,min_ops,min_len,target\n"));
        assert_eq!(s, width_census(&t, &Ideal::whole(f3), Execution::default()).unwrap());
    }
}
