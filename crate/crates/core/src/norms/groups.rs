//! Domain groups the norms are evaluated on.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::census::FiniteGroupTable;
use crate::matrix::{is_central, SqMatrix};
use crate::ring::{RingElement, RingSpec};

/// A group with an element sampler and an action by "conjugations".
///
/// For matrix and finite groups `act(s, g) = s g s^-1`; for `Z^2` it is the
/// linear action of a 2x2 integer matrix.
pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;
    type Actor: Clone + Debug + Send + Sync;

    fn describe(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> Self::Actor;
    fn act(&self, s: &Self::Actor, g: &Self::Elem) -> Self::Elem;
    fn is_central(&self, g: &Self::Elem) -> bool;
}

/// How a [`MatrixGroup`] draws elements.
#[derive(Clone, Debug)]
pub enum Sampler {
    /// Pick a level `k` in `min_level..=max_level`, then multiply up to
    /// `max_len` elementary matrices with entries `±c g^k`, `c` in `{1, 2}`.
    Levels {
        generator: RingElement,
        min_level: u32,
        max_level: u32,
        max_len: usize,
    },
    /// Uniform choice from a list.
    List(Arc<Vec<SqMatrix>>),
}

impl Sampler {
    fn draw(&self, ring: RingSpec, n: usize, rng: &mut ChaCha8Rng) -> SqMatrix {
        match self {
            Sampler::Levels {
                generator,
                min_level,
                max_level,
                max_len,
            } => {
                let k = rng.gen_range(*min_level..=*max_level);
                let base = generator.pow(k);
                let len = rng.gen_range(1..=*max_len);
                let mut g = SqMatrix::identity(ring, n).expect("n >= 2");
                for _ in 0..len {
                    let i = rng.gen_range(1..=n);
                    let mut j = rng.gen_range(1..n);
                    if j >= i {
                        j += 1;
                    }
                    let c = ring.int(if rng.gen_bool(0.5) { 1 } else { 2 } * if rng.gen_bool(0.5) { 1 } else { -1 });
                    let e = SqMatrix::elementary(ring, n, i, j, &c * &base).expect("valid indices");
                    g = &g * &e;
                }
                g
            }
            Sampler::List(items) => items[rng.gen_range(0..items.len())].clone(),
        }
    }
}

/// Subgroup of `SL_n(R)` described by samplers for its elements and for the
/// conjugating group.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub ring: RingSpec,
    pub n: usize,
    pub elements: Sampler,
    pub actors: Sampler,
    pub label: String,
}

impl MatrixGroup {
    /// `SL_n(R)` sampled by levels of `generator`, conjugated by `SL_n(R)`.
    pub fn leveled(ring: RingSpec, n: usize, generator: RingElement, max_level: u32, label: &str) -> Self {
        MatrixGroup {
            ring,
            n,
            elements: Sampler::Levels {
                generator,
                min_level: 0,
                max_level,
                max_len: 6,
            },
            actors: Sampler::Levels {
                generator: ring.one(),
                min_level: 0,
                max_level: 0,
                max_len: 6,
            },
            label: label.to_string(),
        }
    }
}

impl MatrixGroup {
    pub fn identity_matrix(&self) -> SqMatrix {
        SqMatrix::identity(self.ring, self.n).expect("n >= 2")
    }
}

impl Group for MatrixGroup {
    type Elem = SqMatrix;
    type Actor = SqMatrix;

    fn describe(&self) -> String {
        self.label.clone()
    }
    fn identity(&self) -> SqMatrix {
        self.identity_matrix()
    }
    fn mul(&self, a: &SqMatrix, b: &SqMatrix) -> SqMatrix {
        a * b
    }
    fn inv(&self, a: &SqMatrix) -> SqMatrix {
        a.inverse().expect("group element")
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> SqMatrix {
        self.elements.draw(self.ring, self.n, rng)
    }
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> SqMatrix {
        self.actors.draw(self.ring, self.n, rng)
    }
    fn act(&self, s: &SqMatrix, g: &SqMatrix) -> SqMatrix {
        g.conjugate_by(s).expect("group element")
    }
    fn is_central(&self, g: &SqMatrix) -> bool {
        is_central(g)
    }
}

/// A subset of a finite table closed under products, acted on by
/// conjugation with `actors` (indices into the same table).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub table: Arc<FiniteGroupTable>,
    pub members: Arc<Vec<usize>>,
    pub actors: Arc<Vec<usize>>,
    pub label: String,
}

impl FiniteGroup {
    /// The whole table, acting on itself.
    pub fn whole(table: Arc<FiniteGroupTable>, label: &str) -> Self {
        let all: Arc<Vec<usize>> = Arc::new((0..table.order()).collect());
        FiniteGroup {
            table,
            members: all.clone(),
            actors: all,
            label: label.to_string(),
        }
    }
}

impl Group for FiniteGroup {
    type Elem = usize;
    type Actor = usize;

    fn describe(&self) -> String {
        self.label.clone()
    }
    fn identity(&self) -> usize {
        self.table.identity()
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table.mul(*a, *b)
    }
    fn inv(&self, a: &usize) -> usize {
        self.table.inv(*a)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        self.members[rng.gen_range(0..self.members.len())]
    }
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> usize {
        self.actors[rng.gen_range(0..self.actors.len())]
    }
    fn act(&self, s: &usize, g: &usize) -> usize {
        self.table.conj(*g, *s)
    }
    fn is_central(&self, g: &usize) -> bool {
        self.table.is_central(*g)
    }
}

/// `Z^2` under addition, acted on by integer matrices.
#[derive(Clone, Debug)]
pub struct Z2Group {
    /// Sampled coordinates are `scale * k` with `|k| <= bound`, and
    /// additionally multiplied by `scale^e` for a random `e <= depth`.
    pub scale: i64,
    pub bound: i64,
    pub depth: u32,
    /// Actors are `[[1, scale_act * k], [0, 1]]` or its transpose.
    pub scale_act: i64,
    pub transpose_actors: bool,
    pub label: String,
}

pub type Z2 = (BigInt, BigInt);
pub type Mat2i = [[i64; 2]; 2];

impl Group for Z2Group {
    type Elem = Z2;
    type Actor = Mat2i;

    fn describe(&self) -> String {
        self.label.clone()
    }
    fn identity(&self) -> Z2 {
        (BigInt::from(0), BigInt::from(0))
    }
    fn mul(&self, a: &Z2, b: &Z2) -> Z2 {
        (&a.0 + &b.0, &a.1 + &b.1)
    }
    fn inv(&self, a: &Z2) -> Z2 {
        (-&a.0, -&a.1)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Z2 {
        let mut coord = || {
            let k = rng.gen_range(-self.bound..=self.bound);
            let e = rng.gen_range(0..=self.depth);
            BigInt::from(self.scale) * BigInt::from(k) * BigInt::from(self.scale).pow(e)
        };
        (coord(), coord())
    }
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> Mat2i {
        let k = rng.gen_range(-5..=5) * self.scale_act;
        if self.transpose_actors && rng.gen_bool(0.5) {
            [[1, 0], [k, 1]]
        } else {
            [[1, k], [0, 1]]
        }
    }
    fn act(&self, s: &Mat2i, g: &Z2) -> Z2 {
        (
            BigInt::from(s[0][0]) * &g.0 + BigInt::from(s[0][1]) * &g.1,
            BigInt::from(s[1][0]) * &g.0 + BigInt::from(s[1][1]) * &g.1,
        )
    }
    fn is_central(&self, _: &Z2) -> bool {
        true
    }
}

/// Direct product.
#[derive(Clone, Debug)]
pub struct ProductGroup<N, M> {
    pub left: N,
    pub right: M,
}

impl<N: Group, M: Group> Group for ProductGroup<N, M> {
    type Elem = (N::Elem, M::Elem);
    type Actor = (N::Actor, M::Actor);

    fn describe(&self) -> String {
        format!("{} x {}", self.left.describe(), self.right.describe())
    }
    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        (self.left.sample(rng), self.right.sample(rng))
    }
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> Self::Actor {
        (self.left.sample_actor(rng), self.right.sample_actor(rng))
    }
    fn act(&self, s: &Self::Actor, g: &Self::Elem) -> Self::Elem {
        (self.left.act(&s.0, &g.0), self.right.act(&s.1, &g.1))
    }
    fn is_central(&self, g: &Self::Elem) -> bool {
        self.left.is_central(&g.0) && self.right.is_central(&g.1)
    }
}

/// `E / A` for a finite central subgroup `A`; elements are canonical coset
/// representatives (smallest by debug rendering).
#[derive(Clone, Debug)]
pub struct QuotientGroup<G: Group> {
    pub base: G,
    pub central: Vec<G::Elem>,
}

impl<G: Group> QuotientGroup<G> {
    pub fn coset(&self, g: &G::Elem) -> Vec<G::Elem> {
        self.central.iter().map(|a| self.base.mul(g, a)).collect()
    }

    pub fn canonical(&self, g: &G::Elem) -> G::Elem {
        self.coset(g)
            .into_iter()
            .min_by_key(|x| format!("{x:?}"))
            .expect("nonempty subgroup")
    }
}

impl<G: Group> Group for QuotientGroup<G> {
    type Elem = G::Elem;
    type Actor = G::Actor;

    fn describe(&self) -> String {
        format!("{} / {} central elements", self.base.describe(), self.central.len())
    }
    fn identity(&self) -> G::Elem {
        self.canonical(&self.base.identity())
    }
    fn mul(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.canonical(&self.base.mul(a, b))
    }
    fn inv(&self, a: &G::Elem) -> G::Elem {
        self.canonical(&self.base.inv(a))
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> G::Elem {
        self.canonical(&self.base.sample(rng))
    }
    fn sample_actor(&self, rng: &mut ChaCha8Rng) -> G::Actor {
        self.base.sample_actor(rng)
    }
    fn act(&self, s: &G::Actor, g: &G::Elem) -> G::Elem {
        self.canonical(&self.base.act(s, g))
    }
    fn is_central(&self, g: &G::Elem) -> bool {
        self.base.is_central(g)
    }
}
