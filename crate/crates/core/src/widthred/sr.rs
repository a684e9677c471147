use super::WidthError;
use crate::ring::{extended_gcd, RingElement, RingSpec};

/// Total number of shift vectors tried before giving up.
pub const SR_SEARCH_BOUND: usize = 10_000;

/// `t` with `(a_1 + t_1 a_n^2, ..., a_{n-1} + t_{n-1} a_n^2)` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRWitness {
    pub t: Vec<RingElement>,
    pub shifted: Vec<RingElement>,
    /// Bezout coefficients for `shifted`, summing to 1.
    pub certificate: Vec<RingElement>,
}

/// Bezout coefficients with `sum c_k v_k = 1`, if `v` is unimodular.
pub(crate) fn unimodular_certificate(v: &[RingElement]) -> Result<Option<Vec<RingElement>>, WidthError> {
    let (g, coeffs) = extended_gcd(v)?;
    Ok(g.inverse().map(|gi| coeffs.iter().map(|c| c * &gi).collect()))
}

/// The k-th element of a fixed enumeration of the ring, small first.
fn nth_element(ring: RingSpec, k: usize) -> Option<RingElement> {
    let signed = |k: usize| -> i64 {
        let h = k.div_ceil(2) as i64;
        if k % 2 == 1 {
            h
        } else {
            -h
        }
    };
    match ring {
        RingSpec::Integers | RingSpec::LocalizedIntegers(_) => Some(ring.int(signed(k))),
        RingSpec::IntegersMod(m) => (k < m as usize).then(|| ring.int(k as i64)),
        RingSpec::PolyOverFp(p) => {
            // base-p digits of k are the coefficients
            let mut coeffs = Vec::new();
            let mut r = k as u64;
            while r > 0 {
                coeffs.push((r % p) as i64);
                r /= p;
            }
            Some(ring.poly(&coeffs).expect("valid coefficients"))
        }
    }
}

/// Shell enumeration: radius `r` covers shift vectors whose largest
/// enumeration index is exactly `r`.
fn shell(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; len];
    loop {
        if idx.contains(&r) {
            out.push(idx.clone());
        }
        let mut k = 0;
        loop {
            if k == len {
                return out;
            }
            idx[k] += 1;
            if idx[k] <= r {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Stable-range shift for the first column `alpha` of an `SL_n` matrix.
pub fn unimodular_square_shift(alpha: &[RingElement]) -> Result<SRWitness, WidthError> {
    let n = alpha.len();
    if n < 2 {
        return Err(WidthError::BadDimension {
            found: n,
            need: "n >= 2",
        });
    }
    if unimodular_certificate(alpha)?.is_none() {
        return Err(WidthError::NotUnimodular);
    }
    let ring = alpha[0].ring();
    let an2 = &alpha[n - 1] * &alpha[n - 1];
    let prefix = &alpha[..n - 1];
    let mut tried = 0usize;
    for r in 0.. {
        let Some(_) = nth_element(ring, r) else { break };
        for idx in shell(r, n - 1) {
            if tried >= SR_SEARCH_BOUND {
                return Err(WidthError::SearchExhausted { bound: SR_SEARCH_BOUND });
            }
            tried += 1;
            let t: Vec<RingElement> = idx.iter().map(|&i| nth_element(ring, i).expect("in range")).collect();
            let shifted: Vec<RingElement> = prefix.iter().zip(&t).map(|(a, ti)| a + &(ti * &an2)).collect();
            if let Some(certificate) = unimodular_certificate(&shifted)? {
                return Ok(SRWitness {
                    t,
                    shifted,
                    certificate,
                });
            }
        }
    }
    Err(WidthError::SearchExhausted { bound: tried })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingSpec::Integers.int(x)).collect()
    }

    #[test]
    fn already_unimodular() {
        let w = unimodular_square_shift(&z(&[2, 3, 5])).unwrap();
        assert!(w.t.iter().all(|t| t.is_zero()));
        let w = unimodular_square_shift(&z(&[1, 0, 7])).unwrap();
        assert!(w.t.iter().all(|t| t.is_zero()));
    }

    #[test]
    fn shift_needed() {
        let w = unimodular_square_shift(&z(&[2, 4, 3])).unwrap();
        assert!(w.t.iter().any(|t| !t.is_zero()));
        let one = w
            .certificate
            .iter()
            .zip(&w.shifted)
            .fold(RingSpec::Integers.zero(), |acc, (c, s)| &acc + &(c * s));
        assert!(one.is_one());
        assert_eq!(w.shifted[0], &z(&[2])[0] + &(&w.t[0] * &z(&[9])[0]));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(unimodular_square_shift(&z(&[2, 4, 6])), Err(WidthError::NotUnimodular));
    }

    #[test]
    fn shells_partition() {
        let all: usize = (0..4).map(|r| shell(r, 2).len()).sum();
        assert_eq!(all, 16);
        assert_eq!(shell(0, 3), vec![vec![0, 0, 0]]);
    }
}
