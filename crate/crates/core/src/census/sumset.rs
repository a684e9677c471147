use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::CensusError;
use crate::exec::Execution;
use crate::matrix::SqMatrix;
use crate::ring::RingSpec;

/// Largest `m^{n^2}` the dense bitsets are allowed to cover.
const DENSE_LIMIT: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSetLevel {
    /// Number of summands.
    pub l: usize,
    /// Size of the set of sums of exactly `l` elements.
    pub sums: usize,
    /// Size of the union over all levels `<= l`.
    pub covered: usize,
    /// How many elements of the target congruence class are covered.
    pub target_covered: usize,
    /// Scalars `c` with `c I` covered.
    pub scalars: Vec<u64>,
}

/// Growth of `S_M(Gamma)` modulo `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSetReport {
    pub modulus: u64,
    pub level: u64,
    pub group_order: usize,
    pub target_size: usize,
    pub levels: Vec<SumSetLevel>,
}

impl SumSetReport {
    /// First `l` at which the whole class `{g = I mod level}` is covered.
    pub fn covered_at(&self) -> Option<usize> {
        self.levels
            .iter()
            .find(|lv| lv.target_covered == self.target_size)
            .map(|lv| lv.l)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "modulus={} level={} group_order={} target_size={}\nl,sums,covered,target_covered,scalars\n",
            self.modulus, self.level, self.group_order, self.target_size
        );
        for lv in &self.levels {
            let scalars: Vec<String> = lv.scalars.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                lv.l,
                lv.sums,
                lv.covered,
                lv.target_covered,
                scalars.join(" ")
            ));
        }
        match self.covered_at() {
            Some(l) => out.push_str(&format!("covered_at={l}\n")),
            None => out.push_str("covered_at=none\n"),
        }
        out
    }
}

struct Codec {
    m: u64,
    cells: usize,
}

impl Codec {
    fn encode(&self, digits: &[u64]) -> usize {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.m + d) as usize
    }

    fn decode(&self, mut code: usize, out: &mut [u64]) {
        for d in out.iter_mut().take(self.cells) {
            *d = code as u64 % self.m;
            code /= self.m as usize;
        }
    }
}

fn residues(g: &SqMatrix, m: u64) -> Result<Vec<u64>, CensusError> {
    let mb = BigInt::from(m);
    g.entries()
        .iter()
        .map(|e| match (e.as_bigint(), e.as_residue(), e.ring()) {
            (Some(v), _, _) => Ok(v.mod_floor(&mb).to_u64().expect("reduced")),
            (_, Some(r), RingSpec::IntegersMod(k)) if k % m == 0 => Ok(r % m),
            _ => Err(CensusError::BadSumSetInput),
        })
        .collect()
}

fn mat_mul_mod(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s = (s + a[r * n + k] * b[k * n + c]) % m;
            }
            out[r * n + c] = s;
        }
    }
    out
}

/// Sums of `l <= max_l` elements of the group generated by `gens`, all
/// taken modulo `m`, with coverage of `{g in SL_n(Z/m) : g = I mod level}`.
pub fn sum_set_census(
    gens: &[SqMatrix],
    m: u64,
    max_l: usize,
    level: u64,
    exec: Execution,
) -> Result<SumSetReport, CensusError> {
    if gens.is_empty() || m < 2 || level == 0 || !m.is_multiple_of(level) || max_l == 0 {
        return Err(CensusError::BadSumSetInput);
    }
    let n = gens[0].dim();
    if gens.iter().any(|g| g.dim() != n) {
        return Err(CensusError::BadSumSetInput);
    }
    let cells = n * n;
    let size = (m as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if size > DENSE_LIMIT as u128 {
        return Err(CensusError::BudgetExceeded {
            order: size,
            budget: DENSE_LIMIT as usize,
        });
    }
    let size = size as usize;
    let codec = Codec { m, cells };
    let gens: Vec<Vec<u64>> = gens.iter().map(|g| residues(g, m)).collect::<Result<_, _>>()?;

    // The group itself, by closure from the identity.
    let id: Vec<u64> = (0..cells).map(|k| u64::from(k % (n + 1) == 0)).collect();
    let mut seen = vec![false; size];
    let mut group = vec![id.clone()];
    seen[codec.encode(&id)] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for g in &gens {
            let h = mat_mul_mod(&group[k], g, n, m);
            let code = codec.encode(&h);
            if !seen[code] {
                seen[code] = true;
                queue.push_back(group.len());
                group.push(h);
            }
        }
    }

    // Target class, enumerated as I + level * X with det = 1.
    let ring = RingSpec::integers_mod(m).map_err(|_| CensusError::BadSumSetInput)?;
    let steps = m / level;
    let mut target = Vec::new();
    let mut offsets = vec![0u64; cells];
    'outer: loop {
        let digits: Vec<u64> = (0..cells).map(|k| (id[k] + offsets[k] * level) % m).collect();
        let mat = SqMatrix::from_rows(
            ring,
            (0..n)
                .map(|r| (0..n).map(|c| ring.int(digits[r * n + c] as i64)).collect())
                .collect(),
        )?;
        if mat.is_special() {
            target.push(codec.encode(&digits));
        }
        for o in offsets.iter_mut() {
            *o += 1;
            if *o < steps {
                continue 'outer;
            }
            *o = 0;
        }
        break;
    }
    let scalar_codes: Vec<(u64, usize)> = (0..m)
        .map(|c| {
            let digits: Vec<u64> = id.iter().map(|&d| d * c).collect();
            (c, codec.encode(&digits))
        })
        .collect();

    let mut current: Vec<usize> = group.iter().map(|g| codec.encode(g)).collect();
    current.sort_unstable();
    let mut covered = vec![false; size];
    let mut covered_count = 0usize;
    let mut levels = Vec::with_capacity(max_l);
    for l in 1..=max_l {
        if l > 1 {
            let chunks: Vec<&[usize]> = current.chunks(256).collect();
            let parts = exec.map(&chunks, |chunk| {
                let mut x = vec![0u64; cells];
                let mut out = Vec::with_capacity(chunk.len() * group.len());
                for &code in chunk.iter() {
                    codec.decode(code, &mut x);
                    for g in &group {
                        let code = x.iter().zip(g).rev().fold(0u64, |acc, (a, b)| acc * m + (a + b) % m);
                        out.push(code as usize);
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            });
            let mut mark = vec![false; size];
            let mut next = Vec::new();
            for part in parts {
                for code in part {
                    if !mark[code] {
                        mark[code] = true;
                        next.push(code);
                    }
                }
            }
            next.sort_unstable();
            current = next;
        }
        for &code in &current {
            if !covered[code] {
                covered[code] = true;
                covered_count += 1;
            }
        }
        levels.push(SumSetLevel {
            l,
            sums: current.len(),
            covered: covered_count,
            target_covered: target.iter().filter(|&&c| covered[c]).count(),
            scalars: scalar_codes
                .iter()
                .filter(|(_, code)| covered[*code])
                .map(|(c, _)| *c)
                .collect(),
        });
    }
    Ok(SumSetReport {
        modulus: m,
        level,
        group_order: group.len(),
        target_size: target.len(),
        levels,
    })
}
