//! Tautological rings of powers of a polarized K3 surface.
//!
//! `R*(S^r)` is generated by the polarizations `h_i`, the canonical
//! 0-cycle classes `o_i` and the big diagonals `D_ij`. The relation list:
//! divisor squares `h_i^2 = d o_i`, per-factor truncation `h_i o_i = 0`,
//! `o_i^2 = 0`, the divisor-diagonal rule `D_ij h_i = h_i o_j + h_j o_i`,
//! point transport `D_ij o_i = o_i o_j`, the diagonal self-intersection
//! `D_ij^2 = 24 o_i o_j`, and the small-diagonal decomposition
//! `D_ij D_jk = D_ij o_k + D_ik o_j + D_jk o_i - o_i o_j - o_i o_k -
//! o_j o_k` in all three orientations of every triple.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cohom::{CohomClass, CohomModel, CycleClassMap};
use crate::config::EngineConfig;
use crate::linalg::DenseMatrix;
use crate::ring::{CycleElement, Monomial, RawPoly, Ring, RingBuilder};
use crate::scalar::Scalar;

pub struct K3PowerRing {
    pub ring: Ring,
    pub r: usize,
    pub d: u32,
    pub h: Vec<usize>,
    pub o: Vec<usize>,
    diag: BTreeMap<(usize, usize), usize>,
}

impl K3PowerRing {
    pub fn build(r: usize, d: u32) -> K3PowerRing {
        assert!(r >= 1, "power must be positive");
        assert!(
            d >= 2 && d.is_multiple_of(2),
            "polarization degree must be even and at least 2"
        );
        let mut b = RingBuilder::new(&format!("R(S^{r}; d={d})"), 2 * r as u32);
        let mut h = Vec::new();
        let mut o = Vec::new();
        let mut diag = BTreeMap::new();
        for i in 0..r {
            h.push(b.gen_classed(&format!("h{}", i + 1), 1, (0, 1)));
        }
        for i in 0..r {
            o.push(b.gen(&format!("o{}", i + 1), 2));
        }
        for i in 0..r {
            for j in (i + 1)..r {
                let idx = b.gen_classed(&format!("D{}{}", i + 1, j + 1), 2, (1, 0));
                diag.insert((i, j), idx);
            }
        }
        let w = b.width();
        let m = |pairs: &[(usize, u8)]| Monomial::from_pairs(w, pairs);

        for i in 0..r {
            // h_i^2 = d o_i
            let mut rel = RawPoly::new(2);
            rel.add_term(m(&[(h[i], 2)]), Scalar::one());
            rel.add_term(m(&[(o[i], 1)]), Scalar::from_int(-(d as i64)));
            b.relation(rel);
            // h_i o_i = 0
            let mut rel = RawPoly::new(3);
            rel.add_term(m(&[(h[i], 1), (o[i], 1)]), Scalar::one());
            b.relation(rel);
            // o_i^2 = 0
            let mut rel = RawPoly::new(4);
            rel.add_term(m(&[(o[i], 2)]), Scalar::one());
            b.relation(rel);
        }
        for (&(i, j), &dij) in &diag {
            // transport: D_ij h_i = D_ij h_j
            let mut rel = RawPoly::new(3);
            rel.add_term(m(&[(dij, 1), (h[i], 1)]), Scalar::one());
            rel.add_term(m(&[(dij, 1), (h[j], 1)]), Scalar::from_int(-1));
            b.relation(rel);
            // divisor rule: D_ij h_i = h_i o_j + h_j o_i
            let mut rel = RawPoly::new(3);
            rel.add_term(m(&[(dij, 1), (h[i], 1)]), Scalar::one());
            rel.add_term(m(&[(h[i], 1), (o[j], 1)]), Scalar::from_int(-1));
            rel.add_term(m(&[(h[j], 1), (o[i], 1)]), Scalar::from_int(-1));
            b.relation(rel);
            // point transport, both sides
            for (a, z) in [(i, j), (j, i)] {
                let mut rel = RawPoly::new(4);
                rel.add_term(m(&[(dij, 1), (o[a], 1)]), Scalar::one());
                rel.add_term(m(&[(o[a], 1), (o[z], 1)]), Scalar::from_int(-1));
                b.relation(rel);
            }
            // self-intersection: D_ij^2 = 24 o_i o_j (the Euler number)
            let mut rel = RawPoly::new(4);
            rel.add_term(m(&[(dij, 2)]), Scalar::one());
            rel.add_term(m(&[(o[i], 1), (o[j], 1)]), Scalar::from_int(-24));
            b.relation(rel);
        }
        // small-diagonal decomposition on every triple, in all orientations
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let dij = diag[&(i, j)];
                    let dik = diag[&(i, k)];
                    let djk = diag[&(j, k)];
                    for (first, second) in [(dij, djk), (dij, dik), (dik, djk)] {
                        let mut rel = RawPoly::new(4);
                        rel.add_term(m(&[(first, 1), (second, 1)]), Scalar::one());
                        rel.add_term(m(&[(dij, 1), (o[k], 1)]), Scalar::from_int(-1));
                        rel.add_term(m(&[(dik, 1), (o[j], 1)]), Scalar::from_int(-1));
                        rel.add_term(m(&[(djk, 1), (o[i], 1)]), Scalar::from_int(-1));
                        rel.add_term(m(&[(o[i], 1), (o[j], 1)]), Scalar::one());
                        rel.add_term(m(&[(o[i], 1), (o[k], 1)]), Scalar::one());
                        rel.add_term(m(&[(o[j], 1), (o[k], 1)]), Scalar::one());
                        b.relation(rel);
                    }
                }
            }
        }
        let top_mono = m(&(0..r).map(|i| (o[i], 1)).collect::<Vec<_>>());
        b.normalizer(top_mono, Scalar::one());
        K3PowerRing {
            ring: b.build(),
            r,
            d,
            h,
            o,
            diag,
        }
    }

    pub fn h_elem(&self, i: usize) -> CycleElement {
        CycleElement::generator(&self.ring, self.h[i])
    }

    pub fn o_elem(&self, i: usize) -> CycleElement {
        CycleElement::generator(&self.ring, self.o[i])
    }

    pub fn diag_elem(&self, i: usize, j: usize) -> CycleElement {
        CycleElement::generator(&self.ring, self.diag_gen(i, j))
    }

    pub fn diag_gen(&self, i: usize, j: usize) -> usize {
        let key = if i < j { (i, j) } else { (j, i) };
        self.diag[&key]
    }

    /// The matching cohomology model.
    pub fn model(&self, cfg: &EngineConfig) -> Arc<CohomModel> {
        let mut cfg = cfg.clone();
        cfg.polarization_degree_d = self.d;
        CohomModel::k3_power(self.r, &cfg)
    }

    /// Cycle class map: `h_i -> h_i`, `o_i -> o_i`,
    /// `D_ij -> o_i + o_j + (1/d) h_i h_j + K_ij`.
    pub fn cycle_map(&self, model: &Arc<CohomModel>) -> CycleClassMap {
        let mut images = Vec::new();
        for i in 0..self.r {
            images.push(CohomClass::letter(model, &format!("h{}", i + 1)));
        }
        for i in 0..self.r {
            images.push(CohomClass::letter(model, &format!("o{}", i + 1)));
        }
        for i in 0..self.r {
            for j in (i + 1)..self.r {
                let oi = CohomClass::letter(model, &format!("o{}", i + 1));
                let oj = CohomClass::letter(model, &format!("o{}", j + 1));
                let hi = CohomClass::letter(model, &format!("h{}", i + 1));
                let hj = CohomClass::letter(model, &format!("h{}", j + 1));
                let k = CohomClass::letter(model, &format!("K{}{}", i + 1, j + 1));
                let img = oi
                    .add(&oj)
                    .add(&hi.mul(&hj).scale(&Scalar::frac(1, self.d as i64)))
                    .add(&k);
                images.push(img);
            }
        }
        CycleClassMap::new(&self.ring, model, images)
    }

    /// Applies a permutation of the factors.
    pub fn permute_factors(&self, x: &CycleElement, sigma: &[usize]) -> CycleElement {
        assert_eq!(sigma.len(), self.r);
        let mut perm = vec![0usize; self.ring.width()];
        for i in 0..self.r {
            perm[self.h[i]] = self.h[sigma[i]];
            perm[self.o[i]] = self.o[sigma[i]];
        }
        for (&(i, j), &idx) in &self.diag {
            perm[idx] = self.diag_gen(sigma[i], sigma[j]);
        }
        x.permute_generators(&perm)
    }

    /// Dimensions of the symmetric-group-invariant part of each graded
    /// piece, by averaging the permutation action traces.
    pub fn invariant_dimensions(&self) -> Vec<Scalar> {
        let perms = permutations(self.r);
        let order = Scalar::from_int(perms.len() as i64);
        (0..=self.ring.top_degree())
            .map(|degree| {
                let basis = self.ring.basis(degree);
                let mut total = Scalar::zero();
                for sigma in &perms {
                    let mut trace = Scalar::zero();
                    for mono in &basis {
                        let elem = CycleElement::from_terms(
                            &self.ring,
                            degree,
                            vec![(mono.clone(), Scalar::one())],
                        );
                        let image = self.permute_factors(&elem, sigma).normal_form();
                        trace += image.coefficient(mono);
                    }
                    total += trace;
                }
                &total / &order
            })
            .collect()
    }

    /// Pushforward along forgetting the last factor, into the ring of the
    /// next smaller power.
    pub fn pushforward_forget(&self, smaller: &K3PowerRing, x: &CycleElement) -> CycleElement {
        assert_eq!(smaller.r + 1, self.r);
        assert_eq!(smaller.d, self.d);
        let last = self.r - 1;
        let nf = x.normal_form();
        let degree = x.degree().saturating_sub(2);
        let mut acc = CycleElement::zero(&smaller.ring, degree);
        if x.degree() < 2 {
            return acc;
        }
        for (mono, coef) in nf.terms() {
            // factor-`last` content of a normal monomial: empty, a bare
            // divisor, a point, or one diagonal leg
            let h_last = mono.exponent(self.h[last]);
            let o_last = mono.exponent(self.o[last]);
            let mut diag_leg: Option<usize> = None;
            for i in 0..last {
                if mono.exponent(self.diag_gen(i, last)) > 0 {
                    diag_leg = Some(i);
                }
            }
            let push_survives = match (h_last, o_last, &diag_leg) {
                (0, 1, None) => true,    // the point class integrates to 1
                (0, 0, Some(_)) => true, // the diagonal transports isomorphically
                (0, 0, None) | (1, 0, None) => false,
                other => unreachable!("unexpected normal-form factor content {other:?}"),
            };
            if !push_survives {
                continue;
            }
            let mut pairs: Vec<(usize, u8)> = Vec::new();
            for i in 0..last {
                pairs.push((smaller.h[i], mono.exponent(self.h[i])));
                pairs.push((smaller.o[i], mono.exponent(self.o[i])));
            }
            for i in 0..last {
                for j in (i + 1)..last {
                    pairs.push((smaller.diag_gen(i, j), mono.exponent(self.diag_gen(i, j))));
                }
            }
            let m = Monomial::from_pairs(smaller.ring.width(), &pairs);
            acc = acc
                .try_add(&CycleElement::from_terms(
                    &smaller.ring,
                    degree,
                    vec![(m, coef.clone())],
                ))
                .expect("same degree");
        }
        acc.normal_form()
    }

    /// The universal-restriction generator set `{h_i, D_ij}` together with
    /// a degree-wise certificate that the subalgebra it generates spans the
    /// whole tautological ring.
    pub fn restriction_image_basis(&self, max_degree: Option<u32>) -> (Vec<CycleElement>, bool) {
        let mut gens: Vec<CycleElement> = (0..self.r).map(|i| self.h_elem(i)).collect();
        for i in 0..self.r {
            for j in (i + 1)..self.r {
                gens.push(self.diag_elem(i, j));
            }
        }
        let top = max_degree.unwrap_or(self.ring.top_degree());
        let mut certified = true;
        for degree in 1..=top {
            let words = words_of_degree(&gens, degree);
            let basis = self.ring.basis(degree);
            if basis.is_empty() {
                continue;
            }
            let index: BTreeMap<&Monomial, usize> =
                basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let rows: Vec<Vec<Scalar>> = words
                .iter()
                .map(|wrd| {
                    let mut row = vec![Scalar::zero(); basis.len()];
                    for (m, c) in wrd.normal_form().terms() {
                        row[index[m]] = c.clone();
                    }
                    row
                })
                .collect();
            let rank = if rows.is_empty() {
                0
            } else {
                DenseMatrix::from_rows(rows).rank()
            };
            if rank != self.ring.graded_dimension(degree) {
                certified = false;
            }
        }
        (gens, certified)
    }
}

impl K3PowerRing {
    /// Degree-wise comparison of the quotient dimension with the Gram rank
    /// of the cohomology model: the content of the injectivity statement
    /// for the cycle class map on the tautological ring.
    pub fn injectivity_check(&self, cfg: &EngineConfig) -> crate::report::CheckEntry {
        use crate::report::CheckEntry;
        let id = format!("k3-injectivity-r{}-d{}", self.r, self.d);
        let title = format!(
            "cycle class map injective on R(S^{}) at degree {}",
            self.r, self.d
        );
        let anchor = "injectivity of the tautological ring of a K3 power";
        let model = self.model(cfg);
        for k in 0..=self.ring.top_degree() {
            let dim = self.ring.graded_dimension(k);
            let rank = model.gram_rank(k);
            if dim != rank {
                return CheckEntry::fail(
                    &id,
                    &title,
                    anchor,
                    format!("degree {k}: quotient dimension {dim}, Gram rank {rank}"),
                );
            }
        }
        CheckEntry::pass(&id, &title, anchor)
    }

    /// The small-diagonal identities on the cube: the three products of
    /// overlapping big diagonals agree, the decomposition holds in
    /// cohomology, and the resulting class is totally symmetric.
    pub fn verify_small_diagonal(&self, cfg: &EngineConfig) -> crate::report::CheckEntry {
        use crate::report::CheckEntry;
        assert!(self.r >= 3, "needs at least a cube");
        let id = format!("k3-small-diagonal-d{}", self.d);
        let title = "small-diagonal decomposition on the K3 cube";
        let anchor = "Beauville-Voisin decomposition of the small diagonal";
        let d12 = self.diag_elem(0, 1);
        let d13 = self.diag_elem(0, 2);
        let d23 = self.diag_elem(1, 2);
        let pairs = [
            d12.try_mul(&d23).expect("same ring"),
            d12.try_mul(&d13).expect("same ring"),
            d13.try_mul(&d23).expect("same ring"),
        ];
        for other in &pairs[1..] {
            if !pairs[0].eq_mod_relations(other) {
                return CheckEntry::fail(
                    &id,
                    title,
                    anchor,
                    (&pairs[0] - other).normal_form().render(),
                );
            }
        }
        // total symmetry of the small diagonal
        let dh1 = pairs[0].try_mul(&self.h_elem(0)).expect("same ring");
        let dh3 = pairs[0].try_mul(&self.h_elem(2)).expect("same ring");
        if !dh1.eq_mod_relations(&dh3) {
            return CheckEntry::fail(&id, title, anchor, (&dh1 - &dh3).normal_form().render());
        }
        // the decomposition relation has zero cohomological residual
        let model = self.model(cfg);
        let map = self.cycle_map(&model);
        for rel in self.ring.relations() {
            let image = map.apply(&rel);
            if !image.is_zero_class() {
                return CheckEntry::fail(&id, title, anchor, image.render());
            }
        }
        CheckEntry::pass(&id, title, anchor)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permutations(&mut items, n, &mut out);
    out
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// All products of the given homogeneous elements with total degree `d`.
fn words_of_degree(gens: &[CycleElement], d: u32) -> Vec<CycleElement> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    fn rec(
        gens: &[CycleElement],
        start: usize,
        remaining: u32,
        current: Option<CycleElement>,
        out: &mut Vec<CycleElement>,
    ) {
        if remaining == 0 {
            if let Some(c) = current {
                out.push(c);
            }
            return;
        }
        for i in start..gens.len() {
            let gd = gens[i].degree();
            if gd > remaining {
                continue;
            }
            let next = match &current {
                None => gens[i].clone(),
                Some(c) => c.try_mul(&gens[i]).expect("same ring"),
            };
            rec(gens, i, remaining - gd, Some(next), out);
        }
    }
    rec(gens, 0, d, None, &mut out);
    out
}

/// Tautological dimension table of the Hilbert square or cube, through the
/// motivic decomposition over the strata of the support map: for `m = 2`
/// the invariant part of the square plus a copy of the surface shifted by
/// one; for `m = 3` the symmetric part of the cube, a full copy of the
/// square shifted by one, and a copy of the surface shifted by two.
pub fn hilbert_dims(m: usize, d: u32) -> Vec<usize> {
    assert!(m == 2 || m == 3, "Hilbert bookkeeping covers m = 2, 3");
    let surface = K3PowerRing::build(1, d);
    let surface_dims: Vec<usize> = (0..=2)
        .map(|k| surface.ring.graded_dimension(k))
        .collect();
    match m {
        2 => {
            let square = K3PowerRing::build(2, d);
            let inv = square.invariant_dimensions();
            (0..=4usize)
                .map(|k| {
                    let sym = inv[k].to_i64().expect("integer dimension") as usize;
                    let shifted = if k >= 1 && k - 1 <= 2 {
                        surface_dims[k - 1]
                    } else {
                        0
                    };
                    sym + shifted
                })
                .collect()
        }
        3 => {
            let cube = K3PowerRing::build(3, d);
            let inv = cube.invariant_dimensions();
            let square = K3PowerRing::build(2, d);
            let square_dims: Vec<usize> =
                (0..=4).map(|k| square.ring.graded_dimension(k)).collect();
            (0..=6usize)
                .map(|k| {
                    let sym = inv[k].to_i64().expect("integer dimension") as usize;
                    let mid = if k >= 1 && k - 1 <= 4 {
                        square_dims[k - 1]
                    } else {
                        0
                    };
                    let deep = if k >= 2 && k - 2 <= 2 {
                        surface_dims[k - 2]
                    } else {
                        0
                    };
                    sym + mid + deep
                })
                .collect()
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn surface_ring() {
        let s = K3PowerRing::build(1, 4);
        let dims: Vec<usize> = (0..=2).map(|k| s.ring.graded_dimension(k)).collect();
        assert_eq!(dims, vec![1, 1, 1]);
        let rel = &s.h_elem(0).pow(2) - &s.o_elem(0).scale(&Scalar::from_int(4));
        assert!(rel.is_zero());
        assert_eq!(s.h_elem(0).pow(2).integrate().unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn square_dimensions_both_paths() {
        let sq = K3PowerRing::build(2, 4);
        let dims: Vec<usize> = (0..=4).map(|k| sq.ring.graded_dimension(k)).collect();
        assert_eq!(dims, vec![1, 2, 4, 2, 1]);
        let model = sq.model(&cfg());
        for k in 0..=4u32 {
            assert_eq!(sq.ring.graded_dimension(k), model.gram_rank(k));
        }
        // six raw monomials in degree 2 before the quotient
        assert_eq!(sq.ring.monomials(2).len(), 6);
    }

    #[test]
    fn cube_degree_two_dimension() {
        let cube = K3PowerRing::build(3, 4);
        assert_eq!(cube.ring.monomials(2).len(), 12);
        assert_eq!(cube.ring.graded_dimension(2), 9);
    }

    #[test]
    fn relations_hold_in_cohomology() {
        for (r, d) in [(2usize, 4u32), (3, 4), (2, 2), (3, 2)] {
            let ring = K3PowerRing::build(r, d);
            let model = ring.model(&cfg());
            let map = ring.cycle_map(&model);
            for rel in ring.ring.relations() {
                assert!(
                    map.apply(&rel).is_zero_class(),
                    "relation image nonzero for r={r}, d={d}"
                );
            }
        }
    }

    #[test]
    fn small_diagonal_identities() {
        let cube = K3PowerRing::build(3, 4);
        let d12 = cube.diag_elem(0, 1);
        let d13 = cube.diag_elem(0, 2);
        let d23 = cube.diag_elem(1, 2);
        let delta_a = d12.try_mul(&d23).unwrap();
        let delta_b = d12.try_mul(&d13).unwrap();
        let delta_c = d13.try_mul(&d23).unwrap();
        assert!(delta_a.eq_mod_relations(&delta_b));
        assert!(delta_a.eq_mod_relations(&delta_c));
        // the small diagonal is totally symmetric: delta * h1 = delta * h3
        let dh1 = delta_a.try_mul(&cube.h_elem(0)).unwrap();
        let dh3 = delta_a.try_mul(&cube.h_elem(2)).unwrap();
        assert!(dh1.eq_mod_relations(&dh3));
    }

    #[test]
    fn top_degree_is_the_point_class() {
        for (r, d) in [(2usize, 4u32), (3, 4), (2, 2)] {
            let ring = K3PowerRing::build(r, d);
            let top = ring.ring.top_degree();
            assert_eq!(ring.ring.graded_dimension(top), 1);
            let basis = ring.ring.basis(top);
            let expected = Monomial::from_pairs(
                ring.ring.width(),
                &(0..r).map(|i| (ring.o[i], 1)).collect::<Vec<_>>(),
            );
            assert_eq!(basis, vec![expected]);
        }
    }

    #[test]
    fn injectivity_for_powers_up_to_three() {
        for (r, d) in [(1usize, 4u32), (2, 4), (3, 4), (1, 2), (2, 2), (3, 2)] {
            let ring = K3PowerRing::build(r, d);
            let model = ring.model(&cfg());
            for k in 0..=ring.ring.top_degree() {
                assert_eq!(
                    ring.ring.graded_dimension(k),
                    model.gram_rank(k),
                    "mismatch at r={r}, d={d}, degree {k}"
                );
            }
        }
    }

    #[test]
    fn symmetric_equivariance_of_normal_forms() {
        let cube = K3PowerRing::build(3, 4);
        let sigma = vec![1usize, 2, 0];
        let x = cube
            .diag_elem(0, 1)
            .try_mul(&cube.h_elem(0))
            .unwrap()
            .try_add(&cube.h_elem(2).pow(2).try_mul(&cube.h_elem(0)).unwrap())
            .unwrap();
        let lhs = cube.permute_factors(&x.normal_form(), &sigma);
        let rhs = cube.permute_factors(&x, &sigma).normal_form();
        assert!(lhs.eq_mod_relations(&rhs));
    }

    #[test]
    fn restriction_basis_certificates() {
        for r in 1..=3usize {
            let ring = K3PowerRing::build(r, 4);
            let (gens, certified) = ring.restriction_image_basis(None);
            assert!(certified, "span certificate failed for r={r}");
            let expected = r + r * (r - 1) / 2;
            assert_eq!(gens.len(), expected);
        }
    }

    #[test]
    fn forgetting_a_factor() {
        let cube = K3PowerRing::build(3, 4);
        let square = K3PowerRing::build(2, 4);
        // o_3 integrates out
        let x = cube.h_elem(0).try_mul(&cube.o_elem(2)).unwrap();
        let pushed = cube.pushforward_forget(&square, &x);
        assert!(pushed.eq_mod_relations(&square.h_elem(0)));
        // a dangling divisor dies
        let y = cube.h_elem(0).try_mul(&cube.h_elem(2)).unwrap();
        assert!(cube.pushforward_forget(&square, &y).is_zero());
        // the diagonal transports
        let z = cube.diag_elem(0, 2).try_mul(&cube.h_elem(1)).unwrap();
        let pushed = cube.pushforward_forget(&square, &z);
        assert!(pushed.eq_mod_relations(&square.h_elem(1)));
    }

    #[test]
    fn pushforward_is_adjoint_to_pullback() {
        // ∫ π_*(x) · y = ∫ x · π^*(y) through the cohomology models
        let cube = K3PowerRing::build(3, 4);
        let square = K3PowerRing::build(2, 4);
        let model3 = cube.model(&cfg());
        let model2 = square.model(&cfg());
        let map3 = cube.cycle_map(&model3);
        let map2 = square.cycle_map(&model2);
        let xs = [
            cube.diag_elem(0, 2).try_mul(&cube.diag_elem(1, 2)).unwrap(),
            cube.o_elem(2)
                .try_mul(&cube.h_elem(0))
                .unwrap()
                .try_mul(&cube.h_elem(1))
                .unwrap(),
        ];
        for x in &xs {
            let y_deg = 4 - (x.degree() - 2);
            for y_mono in square.ring.monomials(y_deg) {
                let y =
                    CycleElement::from_terms(&square.ring, y_deg, vec![(y_mono, Scalar::one())]);
                // pull y back to the cube (same exponents on the first two factors)
                let y_m = y.terms().next().unwrap().0.clone();
                let mut pairs: Vec<(usize, u8)> = Vec::new();
                for i in 0..2 {
                    pairs.push((cube.h[i], y_m.exponent(square.h[i])));
                    pairs.push((cube.o[i], y_m.exponent(square.o[i])));
                }
                pairs.push((cube.diag_gen(0, 1), y_m.exponent(square.diag_gen(0, 1))));
                let y_up = CycleElement::from_terms(
                    &cube.ring,
                    y_deg,
                    vec![(
                        Monomial::from_pairs(cube.ring.width(), &pairs),
                        Scalar::one(),
                    )],
                );
                let lhs = map2
                    .apply(&cube.pushforward_forget(&square, x))
                    .pair(&map2.apply(&y));
                let rhs = map3.apply(x).pair(&map3.apply(&y_up));
                assert_eq!(lhs, rhs, "adjunction failed");
            }
        }
    }

    #[test]
    fn hilbert_tables() {
        let t2 = hilbert_dims(2, 4);
        assert_eq!(t2[0], 1);
        assert_eq!(t2[1], 2);
        // Poincaré symmetry of the table
        assert_eq!(t2, t2.iter().rev().copied().collect::<Vec<_>>());
        let t3 = hilbert_dims(3, 4);
        assert_eq!(t3[0], 1);
        assert_eq!(t3[1], 2);
        assert_eq!(t3, t3.iter().rev().copied().collect::<Vec<_>>());
    }
}
