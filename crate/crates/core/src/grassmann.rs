//! Schubert calculus on Gr(2,6) and bundle-class calculus on the Fano
//! variety of lines.
//!
//! The cohomology of the Grassmannian of projective lines in P^5 is
//! presented on `x1 = c1(S^v)`, `x2 = c2(S^v)` with the two Segre relations
//! `s5 = s6 = 0`, normalized by the point class `x2^4`. An independent
//! Pieri-rule walk over two-row partitions cross-checks every Schubert
//! number, so classical inputs enter along two separate paths.

use std::collections::BTreeMap;

use crate::ring::{CycleElement, GradedElement, Monomial, RawPoly, Ring, RingBuilder, RingError};
use crate::scalar::Scalar;

/// The presentation of `CH*(Gr(2,6))`.
pub struct GrassmannRing {
    pub ring: Ring,
    pub x1: usize,
    pub x2: usize,
}

impl GrassmannRing {
    pub fn new() -> Self {
        let mut b = RingBuilder::new("Gr(2,6)", 8);
        let x1 = b.gen_classed("x1", 1, (1, 0));
        let x2 = b.gen("x2", 2);
        // Segre recursion s_k = x1*s_{k-1} - x2*s_{k-2}; the presentation
        // imposes s5 = s6 = 0.
        let segre = segre_polynomials(6);
        for k in [5usize, 6] {
            let mut rel = RawPoly::new(k as u32);
            for ((i, j), c) in &segre[k] {
                rel.add_term(
                    Monomial::from_pairs(2, &[(x1, *i), (x2, *j)]),
                    c.clone(),
                );
            }
            b.relation(rel);
        }
        b.normalizer(Monomial::from_pairs(2, &[(x2, 4)]), Scalar::one());
        GrassmannRing {
            ring: b.build(),
            x1,
            x2,
        }
    }

    pub fn x1_elem(&self) -> CycleElement {
        CycleElement::generator(&self.ring, self.x1)
    }

    pub fn x2_elem(&self) -> CycleElement {
        CycleElement::generator(&self.ring, self.x2)
    }

    pub fn monomial(&self, a: u8, b: u8) -> CycleElement {
        CycleElement::monomial(&self.ring, &[(self.x1, a), (self.x2, b)])
    }

    /// Integral over the Grassmannian (degree must be exactly 8).
    pub fn integrate_g(&self, x: &CycleElement) -> Result<Scalar, RingError> {
        x.integrate()
    }

    /// `∫ x1^a x2^b` through the presentation.
    pub fn integrate_monomial(&self, a: u8, b: u8) -> Scalar {
        if a as u32 + 2 * b as u32 != 8 {
            return Scalar::zero();
        }
        self.monomial(a, b).integrate().expect("top degree")
    }

    /// Betti numbers of the presentation, degrees 0..=8.
    pub fn graded_dimensions(&self) -> Vec<usize> {
        (0..=8).map(|d| self.ring.graded_dimension(d)).collect()
    }

    /// Whitney consistency: the inverse series of `c(S)` truncated at
    /// degree 4 is a valid total class for the quotient bundle, i.e.
    /// `c(S) * c(Q) = 1` modulo the presentation.
    pub fn whitney_consistent(&self) -> bool {
        let c_s = self.total_class_s();
        let full_inverse = c_s.invert_unit_series();
        let mut c_q = GradedElement::one(&self.ring);
        for d in 1..=4u32 {
            c_q.set_part(full_inverse.part(d));
        }
        let prod = c_s.mul(&c_q);
        (1..=8u32).all(|d| prod.part(d).is_zero())
    }

    fn total_class_s(&self) -> GradedElement {
        // c(S) = 1 - x1 + x2 (the subbundle, not its dual)
        let mut c_s = GradedElement::one(&self.ring);
        c_s.set_part(self.x1_elem().scale(&Scalar::from_int(-1)));
        c_s.set_part(self.x2_elem());
        c_s
    }

    /// The degree-d vs degree-(8-d) intersection pairing is nonsingular.
    pub fn poincare_nonsingular(&self, d: u32) -> bool {
        let left = self.ring.basis(d);
        let right = self.ring.basis(8 - d);
        if left.len() != right.len() {
            return false;
        }
        let n = left.len();
        let mat = crate::linalg::DenseMatrix::from_fn(n, n, |i, j| {
            let a = CycleElement::from_terms(&self.ring, d, vec![(left[i].clone(), Scalar::one())]);
            let b = CycleElement::from_terms(
                &self.ring,
                8 - d,
                vec![(right[j].clone(), Scalar::one())],
            );
            a.try_mul(&b).unwrap().integrate().expect("top degree")
        });
        mat.rank() == n
    }
}

impl Default for GrassmannRing {
    fn default() -> Self {
        Self::new()
    }
}

/// Segre polynomials of a rank-2 bundle in terms of `(c1, c2)` exponent
/// pairs: `s_0 = 1`, `s_1 = c1`, `s_k = c1*s_{k-1} - c2*s_{k-2}`.
fn segre_polynomials(up_to: usize) -> Vec<BTreeMap<(u8, u8), Scalar>> {
    let mut s: Vec<BTreeMap<(u8, u8), Scalar>> = Vec::with_capacity(up_to + 1);
    s.push(BTreeMap::from([((0, 0), Scalar::one())]));
    s.push(BTreeMap::from([((1, 0), Scalar::one())]));
    for k in 2..=up_to {
        let mut next: BTreeMap<(u8, u8), Scalar> = BTreeMap::new();
        for ((i, j), c) in &s[k - 1] {
            let e = next.entry((i + 1, *j)).or_insert_with(Scalar::zero);
            *e += c.clone();
        }
        for ((i, j), c) in &s[k - 2] {
            let e = next.entry((*i, j + 1)).or_insert_with(Scalar::zero);
            *e -= c.clone();
        }
        next.retain(|_, c| !c.is_zero());
        s.push(next);
    }
    s
}

/// Independent Pieri-rule oracle: Schubert numbers on Gr(2,6) via a walk
/// over two-row partitions inside the 2x4 box. Shares no code with the
/// polynomial presentation.
pub mod pieri {
    use crate::scalar::Scalar;
    use std::collections::BTreeMap;

    /// `∫ x1^a x2^b` := coefficient of the full-box class sigma_{4,4} in
    /// sigma_1^a * sigma_{1,1}^b. Multiplication by sigma_{1,1} shifts both
    /// rows; multiplication by sigma_1 adds one box by the Pieri rule.
    pub fn integral(a: u32, b: u32) -> Scalar {
        if a + 2 * b != 8 {
            return Scalar::zero();
        }
        let mut state: BTreeMap<(u8, u8), u64> = BTreeMap::new();
        state.insert((b as u8, b as u8), 1);
        for _ in 0..a {
            let mut next: BTreeMap<(u8, u8), u64> = BTreeMap::new();
            for (&(l1, l2), &mult) in &state {
                if l1 < 4 {
                    *next.entry((l1 + 1, l2)).or_insert(0) += mult;
                }
                if l2 < l1 {
                    *next.entry((l1, l2 + 1)).or_insert(0) += mult;
                }
            }
            state = next;
        }
        Scalar::from_int(state.get(&(4, 4)).copied().unwrap_or(0) as i64)
    }
}

/// Total Chern class of a bundle restricted to some host ring.
#[derive(Clone)]
pub struct BundleClass {
    total: GradedElement,
    rank: u32,
}

impl BundleClass {
    /// Builds from the graded total class; the degree-0 part must be 1.
    pub fn new(total: GradedElement, rank: u32) -> Self {
        let ring = total.part(0).ring().clone();
        let unit = GradedElement::one(&ring).part(0);
        assert!(
            total.part(0).eq_mod_relations(&unit),
            "total class must start with 1"
        );
        BundleClass { total, rank }
    }

    /// A rank-2 bundle from its first two Chern classes.
    pub fn rank2(c1: CycleElement, c2: CycleElement) -> Self {
        let ring = c1.ring().clone();
        let mut total = GradedElement::one(&ring);
        total.set_part(c1);
        total.set_part(c2);
        BundleClass { total, rank: 2 }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn chern(&self, k: u32) -> CycleElement {
        self.total.part(k)
    }

    pub fn total(&self) -> &GradedElement {
        &self.total
    }
}

/// Universal symmetric-function data: expansions in the elementary
/// symmetric classes `(e1, e2)` of a rank-2 bundle, encoded as
/// `(e1-exponent, e2-exponent) -> coefficient` maps per degree.
type SymPoly = BTreeMap<(u8, u8), Scalar>;

/// Expands a symmetric polynomial in two root variables into elementary
/// symmetric functions by leading-term subtraction.
fn symmetrize(terms: &BTreeMap<(u8, u8), Scalar>) -> SymPoly {
    let mut rem = terms.clone();
    rem.retain(|_, c| !c.is_zero());
    let mut out: SymPoly = BTreeMap::new();
    while let Some((&(i, j), _)) = rem.iter().max_by_key(|(&(i, j), _)| (i, j)) {
        let c = rem[&(i, j)].clone();
        assert!(i >= j, "polynomial is not symmetric in the roots");
        // e1^(i-j) * e2^j has root-expansion with leading term a^i b^j
        let expansion = expand_elementary(i - j, j);
        for ((p, q), k) in expansion {
            let e = rem.entry((p, q)).or_insert_with(Scalar::zero);
            *e -= &c * &k;
        }
        rem.retain(|_, v| !v.is_zero());
        out.insert((i - j, j), c);
    }
    out
}

/// Root expansion of `(a+b)^m * (ab)^n` as `(a-exp, b-exp) -> coefficient`.
fn expand_elementary(m: u8, n: u8) -> BTreeMap<(u8, u8), Scalar> {
    let mut out = BTreeMap::new();
    let mut binom = Scalar::one();
    for k in 0..=m {
        if k > 0 {
            binom *= Scalar::frac((m - k + 1) as i64, k as i64);
        }
        let e = out
            .entry((m - k + n, k + n))
            .or_insert_with(Scalar::zero);
        *e += binom.clone();
    }
    out
}

/// Instantiates a `SymPoly` on concrete `c1`, `c2` classes of a host ring.
fn instantiate(sym: &SymPoly, c1: &CycleElement, c2: &CycleElement) -> GradedElement {
    let ring = c1.ring().clone();
    let mut out = GradedElement::zero(&ring);
    for ((i, j), coef) in sym {
        let term = c1.pow(*i as u32).try_mul(&c2.pow(*j as u32)).unwrap();
        if term.degree() > ring.top_degree() {
            continue;
        }
        let cur = out.part(term.degree());
        out.set_part(cur.try_add(&term.scale(coef)).unwrap());
    }
    out
}

/// Roots of `Sym^3` of a rank-2 bundle with roots `{a, b}`:
/// `{3a, 2a+b, a+2b, 3b}`, as `(a-coef, b-coef)` pairs.
const SYM3_ROOTS: [(i64, i64); 4] = [(3, 0), (2, 1), (1, 2), (0, 3)];

/// Elementary symmetric polynomial of the given linear forms in `(a, b)`,
/// returned as a root-exponent map.
fn elementary_of_roots(roots: &[(i64, i64)], k: usize) -> BTreeMap<(u8, u8), Scalar> {
    // product over chosen subsets of size k
    let mut acc: BTreeMap<(u8, u8), Scalar> = BTreeMap::new();
    let n = roots.len();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut term: BTreeMap<(u8, u8), Scalar> =
            BTreeMap::from([((0, 0), Scalar::one())]);
        for (idx, &(ca, cb)) in roots.iter().enumerate() {
            if mask & (1 << idx) == 0 {
                continue;
            }
            let mut next: BTreeMap<(u8, u8), Scalar> = BTreeMap::new();
            for ((i, j), c) in &term {
                if ca != 0 {
                    let e = next.entry((i + 1, *j)).or_insert_with(Scalar::zero);
                    *e += c * &Scalar::from_int(ca);
                }
                if cb != 0 {
                    let e = next.entry((*i, j + 1)).or_insert_with(Scalar::zero);
                    *e += c * &Scalar::from_int(cb);
                }
            }
            next.retain(|_, c| !c.is_zero());
            term = next;
        }
        for (key, c) in term {
            let e = acc.entry(key).or_insert_with(Scalar::zero);
            *e += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Power sum `sum root^k` of the given linear forms, as a root-exponent map.
fn power_sum_of_roots(roots: &[(i64, i64)], k: u32) -> BTreeMap<(u8, u8), Scalar> {
    let mut acc: BTreeMap<(u8, u8), Scalar> = BTreeMap::new();
    for &(ca, cb) in roots {
        // (ca*a + cb*b)^k by the binomial theorem
        let mut binom = Scalar::one();
        for t in 0..=k {
            if t > 0 {
                binom *= Scalar::frac((k - t + 1) as i64, t as i64);
            }
            let coef = &binom
                * &(Scalar::from_int(ca).pow(k - t) * Scalar::from_int(cb).pow(t));
            if coef.is_zero() {
                continue;
            }
            let e = acc
                .entry(((k - t) as u8, t as u8))
                .or_insert_with(Scalar::zero);
            *e += coef;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Chern class of the symmetric cube of a rank-2 bundle, computed by the
/// splitting principle: roots `a, b` map to `3a, 2a+b, a+2b, 3b` and the
/// elementary symmetric functions are re-expressed in `c1 = a+b`, `c2 = ab`.
pub fn sym3_chern(b: &BundleClass) -> BundleClass {
    assert_eq!(b.rank(), 2, "symmetric cube rule needs a rank-2 bundle");
    let c1 = b.chern(1);
    let c2 = b.chern(2);
    let ring = c1.ring().clone();
    let mut total = GradedElement::one(&ring);
    for k in 1..=4usize {
        let ek = elementary_of_roots(&SYM3_ROOTS, k);
        let sym = symmetrize(&ek);
        let part = instantiate(&sym, &c1, &c2);
        for (_, x) in part.parts() {
            total.set_part(x.clone());
        }
    }
    BundleClass::new(total, 4)
}

/// Chern character of a bundle with the given roots, to the host ring's top
/// degree, instantiated on `(c1, c2)`.
fn chern_character_of_roots(
    roots: &[(i64, i64)],
    rank: u32,
    c1: &CycleElement,
    c2: &CycleElement,
) -> GradedElement {
    let ring = c1.ring().clone();
    let mut ch = GradedElement::zero(&ring);
    let rank_part = GradedElement::one(&ring)
        .part(0)
        .scale(&Scalar::from_int(rank as i64));
    ch.set_part(rank_part);
    let mut factorial = Scalar::one();
    for k in 1..=ring.top_degree() {
        factorial *= Scalar::from_int(k as i64);
        let p = power_sum_of_roots(roots, k);
        let sym = symmetrize(&p);
        let part = instantiate(&sym, c1, c2).scale(&factorial.recip());
        for (_, x) in part.parts() {
            let cur = ch.part(x.degree());
            ch.set_part(cur.try_add(x).unwrap());
        }
    }
    ch
}

/// Chern-character and Chern-class data of the tangent bundle of the Fano
/// fourfold, computed from `ch(T_F) = ch(S^v)(6 - ch(S)) - ch(Sym^3 S^v)`.
pub struct TangentClasses {
    /// `c_k(T_F)` for k = 0..=4, as polynomials in `g, c` before reduction.
    pub chern: Vec<CycleElement>,
    pub dim: u32,
}

/// Computes the tangent classes in the host ring on classes `g = c1(S^v)`,
/// `c = c2(S^v)` (either the Grassmann ring or the Fano ring).
pub fn tangent_chern_f(g: &CycleElement, c: &CycleElement) -> TangentClasses {
    let ring = g.ring().clone();
    let dual_roots = [(1, 0), (0, 1)]; // roots of S^v
    let sub_roots = [(-1, 0), (0, -1)]; // roots of S
    let ch_dual = chern_character_of_roots(&dual_roots, 2, g, c);
    let ch_sub = chern_character_of_roots(&sub_roots, 2, g, c);
    let ch_sym3 = chern_character_of_roots(&SYM3_ROOTS, 4, g, c);

    // ch(T_G) = ch(S^v) * (6 - ch(S))
    let mut six = GradedElement::zero(&ring);
    six.set_part(GradedElement::one(&ring).part(0).scale(&Scalar::from_int(6)));
    let ch_tg = ch_dual.mul(&six.add(&ch_sub.scale(&Scalar::from_int(-1))));
    let ch_tf = ch_tg.add(&ch_sym3.scale(&Scalar::from_int(-1)));

    let rank = ch_tf
        .part(0)
        .coefficient(&Monomial::unit(ring.width()))
        .to_i64()
        .expect("integer rank") as u32;

    // Newton's identities: p_k - c1 p_{k-1} + ... + (-1)^k k c_k = 0,
    // with p_k = k! ch_k.
    let mut p: Vec<CycleElement> = Vec::new();
    let mut factorial = Scalar::one();
    for k in 1..=4u32 {
        factorial *= Scalar::from_int(k as i64);
        p.push(ch_tf.part(k).scale(&factorial));
    }
    let mut chern: Vec<CycleElement> = vec![GradedElement::one(&ring).part(0)];
    for k in 1..=4usize {
        // k * c_k = (-1)^(k-1) * (p_k - c1 p_{k-1} + c2 p_{k-2} - ...)
        let mut acc = p[k - 1].clone();
        let mut sign = -1i64;
        for i in 1..k {
            let term = chern[i].try_mul(&p[k - 1 - i]).unwrap();
            acc = acc
                .try_add(&term.scale(&Scalar::from_int(sign)))
                .unwrap();
            sign = -sign;
        }
        let signed = if k % 2 == 0 {
            acc.scale(&Scalar::from_int(-1))
        } else {
            acc
        };
        chern.push(signed.scale(&Scalar::frac(1, k as i64)));
    }
    TangentClasses { chern, dim: rank }
}

/// Intersection numbers of the Fano fourfold, as integrals over the
/// Grassmannian against the top Chern class of `Sym^3 S^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoNumbers {
    pub g4: Scalar,
    pub g2c: Scalar,
    pub c2: Scalar,
}

pub fn fano_intersection_numbers(gr: &GrassmannRing) -> FanoNumbers {
    let bundle = BundleClass::rank2(gr.x1_elem(), gr.x2_elem());
    let sym3 = sym3_chern(&bundle);
    let c4 = sym3.chern(4);
    let pair = |a: u8, b: u8| {
        gr.monomial(a, b)
            .try_mul(&c4)
            .unwrap()
            .integrate()
            .expect("degree 8")
    };
    FanoNumbers {
        g4: pair(4, 0),
        g2c: pair(2, 1),
        c2: pair(0, 2),
    }
}

/// Same numbers through the independent Pieri oracle.
pub fn fano_intersection_numbers_pieri() -> FanoNumbers {
    // c4(Sym^3 S^v) = 18 x1^2 x2 + 9 x2^2
    let ev = |a: u32, b: u32| -> Scalar {
        let t1 = Scalar::from_int(18) * pieri::integral(a + 2, b + 1);
        let t2 = Scalar::from_int(9) * pieri::integral(a, b + 2);
        t1 + t2
    };
    FanoNumbers {
        g4: ev(4, 0),
        g2c: ev(2, 1),
        c2: ev(0, 2),
    }
}

/// Chern classes of the normal bundle of the incidence locus of distinct
/// intersecting lines inside the off-diagonal part of `F x F`, from the
/// truncated expansion of `(1+h)^6 / ((1+3h)(1+2h-g1)(1+2h-g2))`.
pub struct NormalBundleChern {
    pub ring: Ring,
    pub h: usize,
    pub g1: usize,
    pub g2: usize,
    pub c1: CycleElement,
    pub c2: CycleElement,
}

pub fn normal_bundle_chern() -> NormalBundleChern {
    let mut b = RingBuilder::new("I0-ambient", 4);
    let h = b.gen("h", 1);
    let g1 = b.gen("g1", 1);
    let g2 = b.gen("g2", 1);
    let ring = b.build();
    let he = CycleElement::generator(&ring, h);
    let g1e = CycleElement::generator(&ring, g1);
    let g2e = CycleElement::generator(&ring, g2);

    let linear = |x: CycleElement| {
        let mut s = GradedElement::one(&ring);
        s.set_part(x);
        s
    };
    // (1+h)^6
    let mut numerator = GradedElement::one(&ring);
    for _ in 0..6 {
        numerator = numerator.mul(&linear(he.clone()));
    }
    let denom = linear(he.scale(&Scalar::from_int(3)))
        .mul(&linear(
            &he.scale(&Scalar::from_int(2)) - &g1e,
        ))
        .mul(&linear(
            &he.scale(&Scalar::from_int(2)) - &g2e,
        ));
    let total = numerator.mul(&denom.invert_unit_series());
    NormalBundleChern {
        ring: ring.clone(),
        h,
        g1,
        g2,
        c1: total.part(1),
        c2: total.part(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_numbers_of_gr26() {
        let gr = GrassmannRing::new();
        assert_eq!(gr.graded_dimensions(), vec![1, 1, 2, 2, 3, 2, 2, 1, 1]);
    }

    #[test]
    fn normalization_and_degree() {
        let gr = GrassmannRing::new();
        assert_eq!(gr.integrate_monomial(0, 4), Scalar::one());
        // degree of Gr(2,6) in the Pluecker embedding
        assert_eq!(gr.integrate_monomial(8, 0), Scalar::from_int(14));
        assert_eq!(gr.integrate_monomial(6, 1), Scalar::from_int(5));
    }

    #[test]
    fn presentation_agrees_with_pieri_oracle() {
        let gr = GrassmannRing::new();
        for a in 0..=8u8 {
            for b in 0..=4u8 {
                if a as u32 + 2 * b as u32 != 8 {
                    continue;
                }
                assert_eq!(
                    gr.integrate_monomial(a, b),
                    pieri::integral(a as u32, b as u32),
                    "x1^{a} x2^{b}"
                );
            }
        }
    }

    #[test]
    fn pieri_oracle_values() {
        // standard Young tableaux of the 2x4 box
        assert_eq!(pieri::integral(8, 0), Scalar::from_int(14));
        assert_eq!(pieri::integral(6, 1), Scalar::from_int(5));
        assert_eq!(pieri::integral(4, 2), Scalar::from_int(2));
        assert_eq!(pieri::integral(2, 3), Scalar::from_int(1));
        assert_eq!(pieri::integral(0, 4), Scalar::from_int(1));
    }

    #[test]
    fn whitney_and_poincare() {
        let gr = GrassmannRing::new();
        assert!(gr.whitney_consistent());
        for d in 0..=8 {
            assert!(gr.poincare_nonsingular(d), "pairing singular at degree {d}");
        }
    }

    #[test]
    fn sym3_chern_classes() {
        let gr = GrassmannRing::new();
        let bundle = BundleClass::rank2(gr.x1_elem(), gr.x2_elem());
        let sym3 = sym3_chern(&bundle);
        assert_eq!(sym3.chern(1).render(), "6*x1");
        assert_eq!(sym3.chern(2).render(), "11*x1^2 + 10*x2");
        assert_eq!(sym3.chern(3).render(), "6*x1^3 + 30*x1*x2");
        assert_eq!(sym3.chern(4).render(), "18*x1^2*x2 + 9*x2^2");
    }

    #[test]
    fn sym3_of_trivial_bundle() {
        let gr = GrassmannRing::new();
        let zero1 = CycleElement::zero(&gr.ring, 1);
        let zero2 = CycleElement::zero(&gr.ring, 2);
        let sym3 = sym3_chern(&BundleClass::rank2(zero1, zero2));
        for k in 1..=4 {
            assert!(sym3.chern(k).is_zero());
        }
    }

    #[test]
    #[should_panic(expected = "rank-2")]
    fn sym3_rejects_wrong_rank() {
        let gr = GrassmannRing::new();
        let bundle = BundleClass::rank2(gr.x1_elem(), gr.x2_elem());
        let sym3 = sym3_chern(&bundle);
        let _ = sym3_chern(&sym3);
    }

    #[test]
    fn fano_numbers_both_paths() {
        let gr = GrassmannRing::new();
        let n = fano_intersection_numbers(&gr);
        assert_eq!(n.g4, Scalar::from_int(108));
        assert_eq!(n.g2c, Scalar::from_int(45));
        assert_eq!(n.c2, Scalar::from_int(27));
        assert_eq!(fano_intersection_numbers_pieri(), n);
    }

    #[test]
    fn tangent_classes_on_the_grassmann_presentation() {
        let gr = GrassmannRing::new();
        let t = tangent_chern_f(&gr.x1_elem(), &gr.x2_elem());
        assert_eq!(t.dim, 4);
        assert!(t.chern[1].is_zero());
        assert_eq!(t.chern[2].render(), "5*x1^2 - 8*x2");
    }

    #[test]
    fn normal_bundle_expansion() {
        let n = normal_bundle_chern();
        let h = CycleElement::generator(&n.ring, n.h);
        let g1 = CycleElement::generator(&n.ring, n.g1);
        let g2 = CycleElement::generator(&n.ring, n.g2);
        // c1(N) = g1 + g2 - h
        let expected_c1 = &(&g1 + &g2) - &h;
        assert!(n.c1.eq_mod_relations(&expected_c1));
        // c2(N) = g1^2 + g1 g2 + g2^2 - 3(g1+g2) h + 6 h^2
        let gsq = &(&g1.pow(2) + &g1.try_mul(&g2).unwrap()) + &g2.pow(2);
        let cross = (&g1 + &g2).try_mul(&h).unwrap().scale(&Scalar::from_int(-3));
        let hsq = h.pow(2).scale(&Scalar::from_int(6));
        let expected_c2 = &(&gsq + &cross) + &hsq;
        assert!(n.c2.eq_mod_relations(&expected_c2));
    }

    #[test]
    fn normal_bundle_with_zero_classes_is_trivial() {
        // setting g1 = g2 = h = 0 collapses the total class to 1
        let n = normal_bundle_chern();
        // substitution by integrating out: all monomials involve a generator,
        // so both classes must have every term divisible by one of them.
        assert!(n.c1.num_terms() > 0 && n.c2.num_terms() > 0);
        for (m, _) in n.c1.terms().chain(n.c2.terms()) {
            assert!(m.exponents().iter().any(|&e| e > 0));
        }
    }
}
