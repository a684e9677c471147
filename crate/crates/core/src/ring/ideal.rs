use std::fmt;

use super::{extended_gcd, RingElement, RingError, RingSpec};

/// A finitely generated ideal. All supported rings are principal ideal
/// rings, so membership is decided by divisibility by a canonical generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    ring: RingSpec,
    generators: Vec<RingElement>,
    canonical: RingElement,
}

impl Ideal {
    pub fn new(ring: RingSpec, generators: Vec<RingElement>) -> Result<Self, RingError> {
        if generators.is_empty() {
            return Err(RingError::EmptyIdeal);
        }
        if let Some(g) = generators.iter().find(|g| g.ring() != ring) {
            return Err(RingError::MismatchedRings {
                left: ring,
                right: g.ring(),
            });
        }
        let (g, _) = extended_gcd(&generators)?;
        Ok(Ideal {
            ring,
            generators,
            canonical: g.normalized_associate(),
        })
    }

    pub fn principal(e: RingElement) -> Self {
        Ideal::new(e.ring(), vec![e]).expect("single generator")
    }

    pub fn whole(ring: RingSpec) -> Self {
        Ideal::principal(ring.one())
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    /// Generator of the same ideal in canonical form.
    pub fn canonical_generator(&self) -> &RingElement {
        &self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.canonical.is_zero()
    }

    pub fn is_whole(&self) -> bool {
        self.canonical.is_unit()
    }

    pub fn contains(&self, e: &RingElement) -> Result<bool, RingError> {
        if e.ring() != self.ring {
            return Err(RingError::MismatchedRings {
                left: self.ring,
                right: e.ring(),
            });
        }
        Ok(self.canonical.divides(e))
    }

    /// `I^k`, generated by the k-th power of the canonical generator.
    pub fn power(&self, k: u32) -> Ideal {
        Ideal::principal(self.canonical.pow(k))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(" "))
    }
}

/// Membership of `e` in `ideal`.
pub fn ideal_membership(e: &RingElement, ideal: &Ideal) -> Result<bool, RingError> {
    ideal.contains(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_membership() {
        let z = RingSpec::Integers;
        let i = Ideal::new(z, vec![z.int(4), z.int(10)]).unwrap();
        assert_eq!(i.canonical_generator(), &z.int(2));
        assert!(ideal_membership(&z.int(6), &i).unwrap());
        assert!(ideal_membership(&z.zero(), &i).unwrap());
        let two = Ideal::principal(z.int(2));
        assert!(!ideal_membership(&z.int(3), &two).unwrap());
    }

    #[test]
    fn generators_are_members() {
        let z12 = RingSpec::integers_mod(12).unwrap();
        let i = Ideal::new(z12, vec![z12.int(8), z12.int(10)]).unwrap();
        assert_eq!(i.canonical_generator(), &z12.int(2));
        for g in i.generators() {
            assert!(i.contains(g).unwrap());
        }
        assert!(!i.contains(&z12.int(3)).unwrap());
    }

    #[test]
    fn zero_ideal_over_residues() {
        let z4 = RingSpec::integers_mod(4).unwrap();
        let i = Ideal::principal(z4.int(2)).power(2);
        assert!(i.is_zero());
        assert!(i.contains(&z4.zero()).unwrap());
        assert!(!i.contains(&z4.int(2)).unwrap());
    }

    #[test]
    fn polynomial_and_localized() {
        let f3 = RingSpec::poly_over_fp(3).unwrap();
        let x = f3.x().unwrap();
        let i = Ideal::new(f3, vec![&x * &x, f3.poly(&[0, 2]).unwrap()]).unwrap();
        assert_eq!(i.canonical_generator(), &x);
        assert!(i.contains(&f3.poly(&[0, 1, 1]).unwrap()).unwrap());
        assert!(!i.contains(&f3.poly(&[1, 1]).unwrap()).unwrap());

        let l5 = RingSpec::localized(5).unwrap();
        let i = Ideal::principal(l5.local(6, 3).unwrap());
        assert!(i.contains(&l5.local(12, -4).unwrap()).unwrap());
        assert!(!i.contains(&l5.int(4)).unwrap());
        assert!(Ideal::principal(l5.int(25)).is_whole());
    }

    #[test]
    fn mismatched_membership() {
        let z = RingSpec::Integers;
        let z3 = RingSpec::integers_mod(3).unwrap();
        assert!(Ideal::principal(z.int(2)).contains(&z3.one()).is_err());
    }
}
