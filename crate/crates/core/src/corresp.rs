//! Correspondence calculus on the square of the Fano fourfold: transpose,
//! composition, action on classes, the Chow-Künneth projector suite, and
//! the multiplicativity checks.
//!
//! Cohomological composition never leaves the contraction calculus: the
//! middle factor is integrated out by the same Wick pairing that drives
//! top-degree integrals, with chains that reach across emitting new
//! contraction letters on the outer factors. There is no odd cohomology,
//! so a correspondence is determined by this data.
//!
//! Chow-level composition is rule-based on the normal-form shapes (pure
//! tensors, diagonal pushforwards, incidence multiples). Composing two
//! incidence-bearing factors is possible only when the middle class is a
//! point multiple; anything else is the relative-cube gap and is rejected
//! with a typed closure violation rather than attempted.

use std::sync::Arc;

use thiserror::Error;

use crate::cohom::{self, CohomClass, CohomModel, Space};
use crate::fano::FanoSquareRing;
use crate::report::CheckEntry;
use crate::ring::{CycleElement, Monomial};
use crate::scalar::Scalar;

/// A cohomological correspondence from `F` to `F`: a class on the square
/// with source/target bookkeeping.
#[derive(Clone)]
pub struct Correspondence {
    pub class: CohomClass,
    pub source: Space,
    pub target: Space,
    pub name: Option<String>,
}

impl Correspondence {
    pub fn new(class: CohomClass, name: &str) -> Self {
        assert_eq!(class.model().space, Space::FanoSquare);
        Correspondence {
            class,
            source: Space::Fano,
            target: Space::Fano,
            name: Some(name.to_string()),
        }
    }

    pub fn transpose(&self) -> Correspondence {
        Correspondence {
            class: self.class.transpose(),
            source: self.target,
            target: self.source,
            name: self.name.as_ref().map(|n| format!("{n}^t")),
        }
    }
}

#[derive(Debug, Error)]
#[error("outside tautological closure: composing two incidence factors over a middle class `{middle}` of degree {degree}")]
pub struct ClosureViolation {
    pub middle: String,
    pub degree: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SlotLabel {
    /// Polarization insertion living on the middle factor.
    Pol,
    /// Endpoint of an internal contraction (form dual on the middle).
    Edge(usize),
    /// Endpoint of a contraction reaching to the source outer factor.
    StubSource,
    /// Endpoint of a contraction reaching to the target outer factor.
    StubTarget,
}

/// Composition `a ∘ b` of cohomological correspondences on the square
/// model (`b` acts first). The middle copy of `F` is integrated out by
/// Wick pairing; chains between outer stubs emit the form-dual letters of
/// the composite, chains from a polarization insertion to a stub emit
/// polarization letters, and closed loops contribute the trace.
pub fn compose(a: &CohomClass, b: &CohomClass) -> CohomClass {
    let model = a.model();
    assert_eq!(model.id(), b.model().id(), "same model");
    assert_eq!(model.space, Space::FanoSquare);
    let idx = |name: &str| model.letter_index(name).expect("square letter");
    let (ig1, ig2, ib1, ib2, ibb) = (idx("g1"), idx("g2"), idx("b1"), idx("b2"), idx("B"));

    // the composite drops one copy of the middle fourfold
    let total = a.degree() + b.degree();
    if total < 4 {
        return CohomClass::zero(model, 0);
    }
    let mut acc = CohomClass::zero(model, total - 4);

    for (wb, cb) in b.terms() {
        for (wa, ca) in a.terms() {
            // middle = factor 2 of b and factor 1 of a
            let mid_degree = model.factor_degree(wb, 1) + model.factor_degree(wa, 0);
            if mid_degree != 4 {
                continue;
            }
            // assemble middle slots
            let mut slots: Vec<SlotLabel> = Vec::new();
            let mut edge_count = 0usize;
            let mut push_edge_pair = |slots: &mut Vec<SlotLabel>| {
                slots.push(SlotLabel::Edge(edge_count));
                slots.push(SlotLabel::Edge(edge_count));
                edge_count += 1;
            };
            for _ in 0..wb.exponent(ig2) {
                slots.push(SlotLabel::Pol);
            }
            for _ in 0..wb.exponent(ib2) {
                push_edge_pair(&mut slots);
            }
            for _ in 0..wb.exponent(ibb) {
                slots.push(SlotLabel::StubSource);
            }
            for _ in 0..wa.exponent(ig1) {
                slots.push(SlotLabel::Pol);
            }
            for _ in 0..wa.exponent(ib1) {
                push_edge_pair(&mut slots);
            }
            for _ in 0..wa.exponent(ibb) {
                slots.push(SlotLabel::StubTarget);
            }
            debug_assert_eq!(slots.len() as u32, mid_degree);

            let base = [
                (ig1, wb.exponent(ig1)),
                (ib1, wb.exponent(ib1)),
                (ig2, wa.exponent(ig2)),
                (ib2, wa.exponent(ib2)),
            ];
            let coef = ca * cb;
            for matching in matchings_of(slots.len()) {
                let mut value = Scalar::one();
                let mut emit_g1 = 0u8;
                let mut emit_g2 = 0u8;
                let mut emit_b1 = 0u8;
                let mut emit_b2 = 0u8;
                let mut emit_bb = 0u8;
                let mut visited = vec![false; slots.len()];
                let partner = |s: usize| -> usize {
                    for &(x, y) in &matching {
                        if x == s {
                            return y;
                        }
                        if y == s {
                            return x;
                        }
                    }
                    unreachable!()
                };
                let structural = |s: usize| -> Option<usize> {
                    if let SlotLabel::Edge(id) = slots[s] {
                        (0..slots.len()).find(|&t| t != s && slots[t] == SlotLabel::Edge(id))
                    } else {
                        None
                    }
                };
                // paths from endpoint slots
                for s0 in 0..slots.len() {
                    if visited[s0] || matches!(slots[s0], SlotLabel::Edge(_)) {
                        continue;
                    }
                    visited[s0] = true;
                    let mut s = s0;
                    let end = loop {
                        let t = partner(s);
                        visited[t] = true;
                        match structural(t) {
                            None => break t,
                            Some(u) => {
                                visited[u] = true;
                                s = u;
                            }
                        }
                    };
                    match (slots[s0], slots[end]) {
                        (SlotLabel::Pol, SlotLabel::Pol) => value *= model.pol_square().clone(),
                        (SlotLabel::Pol, SlotLabel::StubSource)
                        | (SlotLabel::StubSource, SlotLabel::Pol) => emit_g1 += 1,
                        (SlotLabel::Pol, SlotLabel::StubTarget)
                        | (SlotLabel::StubTarget, SlotLabel::Pol) => emit_g2 += 1,
                        (SlotLabel::StubSource, SlotLabel::StubSource) => emit_b1 += 1,
                        (SlotLabel::StubTarget, SlotLabel::StubTarget) => emit_b2 += 1,
                        (SlotLabel::StubSource, SlotLabel::StubTarget)
                        | (SlotLabel::StubTarget, SlotLabel::StubSource) => emit_bb += 1,
                        _ => unreachable!("endpoints are non-edge slots"),
                    }
                }
                // cycles among the remaining edge slots
                for s0 in 0..slots.len() {
                    if visited[s0] {
                        continue;
                    }
                    let mut s = s0;
                    loop {
                        visited[s] = true;
                        let t = partner(s);
                        visited[t] = true;
                        let u = structural(t).expect("cycle slots are edges");
                        if u == s0 {
                            break;
                        }
                        s = u;
                    }
                    value *= model.full_trace().clone();
                }
                let pairs = [
                    (ig1, base[0].1 + emit_g1),
                    (ib1, base[1].1 + emit_b1),
                    (ig2, base[2].1 + emit_g2),
                    (ib2, base[3].1 + emit_b2),
                    (ibb, emit_bb),
                ];
                let word = Monomial::from_pairs(model.width(), &pairs);
                let term = CohomClass::from_terms(
                    model,
                    acc.degree(),
                    vec![(word, &coef * &value)],
                );
                acc = acc.add(&term);
            }
        }
    }
    acc
}

fn matchings_of(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rem: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rem.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rem[0];
        for k in 1..rem.len() {
            let second = rem[k];
            let rest: Vec<usize> = rem[1..].iter().copied().filter(|&x| x != second).collect();
            acc.push((first, second));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    if n % 2 == 1 {
        return Vec::new();
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&items, &mut Vec::new(), &mut out);
    out
}

/// Embeds a class of the single-fourfold model onto the second factor of
/// the square model.
pub fn embed_on_target(x: &CohomClass, square: &Arc<CohomModel>) -> CohomClass {
    assert_eq!(x.model().space, Space::Fano);
    let g2 = square.letter_index("g2").unwrap();
    let b2 = square.letter_index("b2").unwrap();
    let terms = x
        .terms()
        .map(|(m, c)| {
            let pairs = [(g2, m.exponent(0)), (b2, m.exponent(1))];
            (Monomial::from_pairs(square.width(), &pairs), c.clone())
        })
        .collect();
    CohomClass::from_terms(square, x.degree(), terms)
}

/// Projects a square-model class supported on the second factor back to
/// the single-fourfold model.
pub fn project_target(x: &CohomClass, single: &Arc<CohomModel>) -> CohomClass {
    let model = x.model();
    let g1 = model.letter_index("g1").unwrap();
    let b1 = model.letter_index("b1").unwrap();
    let bb = model.letter_index("B").unwrap();
    let g2 = model.letter_index("g2").unwrap();
    let b2 = model.letter_index("b2").unwrap();
    let terms = x
        .terms()
        .map(|(m, c)| {
            assert!(
                m.exponent(g1) == 0 && m.exponent(b1) == 0 && m.exponent(bb) == 0,
                "class not supported on the target factor"
            );
            let pairs = [(0, m.exponent(g2)), (1, m.exponent(b2))];
            (Monomial::from_pairs(single.width(), &pairs), c.clone())
        })
        .collect();
    CohomClass::from_terms(single, x.degree(), terms)
}

/// Action of a correspondence on a class of the single-fourfold model:
/// compose with the class viewed as a correspondence from a point.
pub fn apply(corr: &CohomClass, x: &CohomClass, single: &Arc<CohomModel>) -> CohomClass {
    let embedded = embed_on_target(x, corr.model());
    let composed = compose(corr, &embedded);
    project_target(&composed, single)
}

/// The five Chow-Künneth projectors realized in cohomology:
/// `pi0 = l1^2/575`, `pi2 = B l1/25`, `pi4 = (B^2 - l1 l2/25)/2`,
/// `pi6 = B l2/25`, `pi8 = l2^2/575`, with `[l] = b` and `[L] = B`.
pub fn ck_projectors(model: &Arc<CohomModel>) -> Vec<Correspondence> {
    let b1 = CohomClass::letter(model, "b1");
    let b2 = CohomClass::letter(model, "b2");
    let bb = CohomClass::letter(model, "B");
    let pi0 = b1.pow(2).scale(&Scalar::frac(1, 575));
    let pi2 = bb.mul(&b1).scale(&Scalar::frac(1, 25));
    let pi4 = bb
        .pow(2)
        .sub(&b1.mul(&b2).scale(&Scalar::frac(1, 25)))
        .scale(&Scalar::frac(1, 2));
    let pi6 = bb.mul(&b2).scale(&Scalar::frac(1, 25));
    let pi8 = b2.pow(2).scale(&Scalar::frac(1, 575));
    vec![
        Correspondence::new(pi0, "pi0"),
        Correspondence::new(pi2, "pi2"),
        Correspondence::new(pi4, "pi4"),
        Correspondence::new(pi6, "pi6"),
        Correspondence::new(pi8, "pi8"),
    ]
}

/// The Künneth degree filter: `pi^{2k}` acts as the identity on the
/// modeled degree-`k` span and as zero on the others.
fn acts_as_projector(
    pi: &Correspondence,
    k: u32,
    single: &Arc<CohomModel>,
) -> bool {
    for d in 0..=4u32 {
        for m in single.monomials(d) {
            let x = CohomClass::from_terms(single, d, vec![(m, Scalar::one())]);
            let image = apply(&pi.class, &x, single);
            let expected = if d == k {
                x.clone()
            } else {
                CohomClass::zero(single, d)
            };
            if !image.eq_class(&expected) {
                return false;
            }
        }
    }
    true
}

/// Exact verification of the projector suite: idempotency, mutual
/// orthogonality, completeness, transpose duality, Lefschetz traces and
/// the action ranks on the modeled span.
pub fn verify_ck_suite(
    model: &Arc<CohomModel>,
    single: &Arc<CohomModel>,
) -> Vec<CheckEntry> {
    let mut entries = Vec::new();
    let pis = ck_projectors(model);
    let anchor = "Chow-Künneth projectors of the Fano fourfold";

    for (i, pi) in pis.iter().enumerate() {
        let square = compose(&pi.class, &pi.class);
        let ok = square.eq_class(&pi.class);
        entries.push(CheckEntry::of(
            &format!("ck-idempotent-pi{}", 2 * i),
            &format!("pi{} is idempotent", 2 * i),
            anchor,
            ok,
            square.sub(&pi.class).render(),
        ));
    }
    for (i, a) in pis.iter().enumerate() {
        for (j, b) in pis.iter().enumerate() {
            if i == j {
                continue;
            }
            let prod = compose(&a.class, &b.class);
            let ok = prod.is_zero_class();
            entries.push(CheckEntry::of(
                &format!("ck-orthogonal-pi{}-pi{}", 2 * i, 2 * j),
                &format!("pi{} ∘ pi{} = 0", 2 * i, 2 * j),
                anchor,
                ok,
                prod.render(),
            ));
        }
    }
    let diag = cohom::diagonal_class(model).expect("diagonal");
    let mut total = CohomClass::zero(model, 4);
    for pi in &pis {
        total = total.add(&pi.class);
    }
    entries.push(CheckEntry::of(
        "ck-completeness",
        "sum of the projectors is the diagonal",
        anchor,
        total.eq_class(&diag),
        total.sub(&diag).render(),
    ));
    for (i, pi) in pis.iter().enumerate() {
        let t = pi.transpose();
        let dual = &pis[pis.len() - 1 - i];
        let ok = t.class.eq_class(&dual.class);
        entries.push(CheckEntry::of(
            &format!("ck-transpose-pi{}", 2 * i),
            &format!("transpose of pi{} is pi{}", 2 * i, 8 - 2 * i),
            anchor,
            ok,
            t.class.sub(&dual.class).render(),
        ));
    }
    // Lefschetz traces: the rank of each idempotent equals its trace
    // against the diagonal: 1, 23, 276, 23, 1.
    let expected_traces = [1i64, 23, 276, 23, 1];
    let mut traces_ok = true;
    let mut residual = String::new();
    for (pi, expected) in pis.iter().zip(expected_traces) {
        let tr = pi.class.mul(&diag).integrate().expect("top degree");
        if tr != Scalar::from_int(expected) {
            traces_ok = false;
            residual = format!("trace {} expected {}", tr, expected);
            break;
        }
    }
    entries.push(CheckEntry::of(
        "ck-traces",
        "projector traces are 1, 23, 276, 23, 1",
        anchor,
        traces_ok,
        residual,
    ));
    // action ranks on the modeled span
    let mut action_ok = true;
    for (i, pi) in pis.iter().enumerate() {
        if !acts_as_projector(pi, i as u32, single) {
            action_ok = false;
            break;
        }
    }
    entries.push(CheckEntry::of(
        "ck-action-identity",
        "each projector is the identity on its modeled degree",
        anchor,
        action_ok,
        "action mismatch".to_string(),
    ));
    // class-level composition agrees with action-level composition
    let mut agree = true;
    'outer: for a in &pis {
        for b in &pis {
            let ab = compose(&a.class, &b.class);
            for d in 0..=4u32 {
                for m in single.monomials(d) {
                    let x = CohomClass::from_terms(single, d, vec![(m, Scalar::one())]);
                    let lhs = apply(&ab, &x, single);
                    let rhs = apply(&a.class, &apply(&b.class, &x, single), single);
                    if !lhs.eq_class(&rhs) {
                        agree = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    entries.push(CheckEntry::of(
        "ck-compose-vs-action",
        "class composition matches action composition on the modeled span",
        anchor,
        agree,
        "composition mismatch".to_string(),
    ));
    entries
}

/// Chow-level composition on the square's tautological ring. Bilinear over
/// the normal-form shapes; two incidence factors compose only over a
/// point-multiple middle.
pub fn compose_chow(
    sq: &FanoSquareRing,
    a: &CycleElement,
    b: &CycleElement,
    cubic_h4: &Scalar,
) -> Result<CycleElement, ClosureViolation> {
    #[derive(Clone)]
    enum Shape {
        Pure(CycleElement, CycleElement),
        DeltaStar(CycleElement),
        IncI(CycleElement, CycleElement),
    }
    let decompose = |x: &CycleElement| -> Vec<(Shape, Scalar)> {
        let f = &sq.fano;
        // Prefer the representation as given: normal forms can trade a
        // diagonal monomial for incidence monomials (the degree-5
        // relation), losing shape information the composition rules use.
        let directly_decomposable = |y: &CycleElement| {
            y.terms()
                .all(|(m, _)| m.exponent(sq.gens.inc) + m.exponent(sq.gens.delta) <= 1)
        };
        let source = if directly_decomposable(x) {
            x.clone()
        } else {
            x.normal_form()
        };
        source
            .terms()
            .map(|(m, c)| {
                let m1 = f.gc_monomial(m.exponent(sq.gens.g1), m.exponent(sq.gens.c1));
                let m2 = f.gc_monomial(m.exponent(sq.gens.g2), m.exponent(sq.gens.c2));
                let e_inc = m.exponent(sq.gens.inc);
                let e_delta = m.exponent(sq.gens.delta);
                assert!(e_inc + e_delta <= 1, "unexpected normal-form shape");
                let shape = if e_delta == 1 {
                    Shape::DeltaStar(m1.try_mul(&m2).expect("same ring"))
                } else if e_inc == 1 {
                    Shape::IncI(m1, m2)
                } else {
                    Shape::Pure(m1, m2)
                };
                (shape, c.clone())
            })
            .collect::<Vec<_>>()
    };
    let f = &sq.fano;
    let s_class = f.i_star(&f.point_class(), cubic_h4); // (1/3)(g^2 - c)
    let out_degree = a.degree() + b.degree() - 4;
    let mut acc = CycleElement::zero(&sq.ring, out_degree);
    for (sb, cb) in decompose(b) {
        for (sa, ca) in decompose(a) {
            let coef = &ca * &cb;
            let composed: CycleElement = match (&sa, &sb) {
                (Shape::Pure(x, y), Shape::Pure(u, v)) => {
                    let mid = v.try_mul(x).expect("same ring");
                    if mid.degree() != 4 {
                        continue;
                    }
                    let weight = mid.integrate().expect("top degree");
                    sq.embed(u, 1)
                        .try_mul(&sq.embed(y, 2))
                        .expect("same ring")
                        .scale(&weight)
                }
                (Shape::Pure(x, y), Shape::DeltaStar(gamma)) => sq
                    .embed(&x.try_mul(gamma).expect("same ring"), 1)
                    .try_mul(&sq.embed(y, 2))
                    .expect("same ring"),
                (Shape::DeltaStar(gamma), Shape::Pure(u, v)) => sq
                    .embed(u, 1)
                    .try_mul(&sq.embed(&gamma.try_mul(v).expect("same ring"), 2))
                    .expect("same ring"),
                (Shape::DeltaStar(gamma), Shape::DeltaStar(beta)) => {
                    sq.delta_star(&gamma.try_mul(beta).expect("same ring"))
                }
                (Shape::DeltaStar(gamma), Shape::IncI(u, v)) => sq
                    .gen_elem(sq.gens.inc)
                    .try_mul(&sq.embed(u, 1))
                    .expect("same ring")
                    .try_mul(&sq.embed(&gamma.try_mul(v).expect("same ring"), 2))
                    .expect("same ring"),
                (Shape::IncI(x, y), Shape::DeltaStar(gamma)) => sq
                    .gen_elem(sq.gens.inc)
                    .try_mul(&sq.embed(&gamma.try_mul(x).expect("same ring"), 1))
                    .expect("same ring")
                    .try_mul(&sq.embed(y, 2))
                    .expect("same ring"),
                (Shape::Pure(x, y), Shape::IncI(u, v)) => {
                    let mid = v.try_mul(x).expect("same ring");
                    let pushed = f.i_star(&mid, cubic_h4);
                    sq.embed(&u.try_mul(&pushed).expect("same ring"), 1)
                        .try_mul(&sq.embed(y, 2))
                        .expect("same ring")
                }
                (Shape::IncI(x, y), Shape::Pure(u, v)) => {
                    let mid = v.try_mul(x).expect("same ring");
                    let pushed = f.i_star(&mid, cubic_h4);
                    sq.embed(u, 1)
                        .try_mul(&sq.embed(&pushed.try_mul(y).expect("same ring"), 2))
                        .expect("same ring")
                }
                (Shape::IncI(x, y), Shape::IncI(u, v)) => {
                    let mid = v.try_mul(x).expect("same ring");
                    if mid.degree() > 4 || mid.is_zero() {
                        continue;
                    }
                    if mid.degree() < 4 {
                        return Err(ClosureViolation {
                            middle: mid.render(),
                            degree: mid.degree(),
                        });
                    }
                    let weight = mid.integrate().expect("top degree");
                    let left = u.try_mul(&s_class).expect("same ring");
                    let right = s_class.try_mul(y).expect("same ring");
                    sq.embed(&left, 1)
                        .try_mul(&sq.embed(&right, 2))
                        .expect("same ring")
                        .scale(&weight)
                }
            };
            if composed.degree() != out_degree {
                debug_assert!(composed.is_zero());
                continue;
            }
            acc = acc.try_add(&composed.scale(&coef)).expect("same degree");
        }
    }
    // returned unreduced so chained compositions keep their shapes
    Ok(acc)
}

/// The Fourier bigrading bookkeeping: for codimension `i`, the pieces
/// `(j, pi^{2i-j})` with their projectors.
pub struct FourierGrading {
    pub pieces: Vec<(u32, u32, usize)>, // (i, j, projector index 0..5)
}

pub fn fourier_grading() -> FourierGrading {
    let mut pieces = Vec::new();
    for i in 0..=4u32 {
        for j in 0..=(2 * i) {
            let k = 2 * i - j;
            if k % 2 == 0 && k <= 8 {
                pieces.push((i, j, (k / 2) as usize));
            }
        }
    }
    FourierGrading { pieces }
}

/// The multiplicativity shadow and the grading transport checks, plus the
/// Chow-level reduction attempt (reported as skipped on a closure
/// violation, never silently passed).
pub fn verify_multiplicativity(
    model: &Arc<CohomModel>,
    single: &Arc<CohomModel>,
    sq: &FanoSquareRing,
    cubic_h4: &Scalar,
) -> Vec<CheckEntry> {
    let mut entries = Vec::new();
    let pis = ck_projectors(model);
    let diag = cohom::diagonal_class(model).expect("diagonal");
    let g1 = CohomClass::letter(model, "g1");
    let delta_g = g1.mul(&diag);
    let anchor = "multiplicativity of the degree filtration";

    // pi4 ∘ Delta_*(g) ∘ pi4 vanishes in cohomology: multiplication by g
    // maps the middle degree into degree 3, which pi4 annihilates.
    let gamma = compose(&pis[2].class, &compose(&delta_g, &pis[2].class));
    entries.push(CheckEntry::of(
        "mult-shadow",
        "pi4 ∘ (g·diagonal) ∘ pi4 vanishes",
        anchor,
        gamma.is_zero_class(),
        gamma.render(),
    ));

    // grading transport: pi6 fixes the class of g^3
    let g = CohomClass::letter(single, "g");
    let g3 = g.pow(3);
    let moved = apply(&pis[3].class, &g3, single);
    entries.push(CheckEntry::of(
        "mult-grade-transport",
        "pi6 fixes the degree-3 power of the polarization",
        anchor,
        moved.eq_class(&g3),
        moved.sub(&g3).render(),
    ));

    // Fourier pieces partition the identity on each modeled degree
    let grading = fourier_grading();
    let mut partition_ok = true;
    'deg: for i in 0..=4u32 {
        for m in single.monomials(i) {
            let x = CohomClass::from_terms(single, i, vec![(m, Scalar::one())]);
            let mut total = CohomClass::zero(single, i);
            for &(pi_i, _j, k) in &grading.pieces {
                if pi_i != i {
                    continue;
                }
                total = total.add(&apply(&pis[k].class, &x, single));
            }
            if !total.eq_class(&x) {
                partition_ok = false;
                break 'deg;
            }
        }
    }
    entries.push(CheckEntry::of(
        "mult-fourier-partition",
        "the Fourier pieces partition the identity on the modeled span",
        anchor,
        partition_ok,
        "partition mismatch".to_string(),
    ));

    // Chow-level reduction of the same composite. The middle classes that
    // arise between two incidence factors have degree below 4, which is
    // exactly the relative-cube gap; the check downgrades to skipped.
    let pi4_chow = {
        let l = sq.l_class();
        let l1l2 = sq
            .embed(&sq.fano.l_class(), 1)
            .try_mul(&sq.embed(&sq.fano.l_class(), 2))
            .expect("same ring");
        (&l.pow(2) - &l1l2.scale(&Scalar::frac(1, 25))).scale(&Scalar::frac(1, 2))
    };
    let delta_g_chow = sq.delta_star(&sq.fano.g_elem());
    let chow_result = compose_chow(sq, &pi4_chow, &delta_g_chow, cubic_h4)
        .and_then(|inner| compose_chow(sq, &inner, &pi4_chow, cubic_h4));
    entries.push(match chow_result {
        Ok(value) => CheckEntry::of(
            "mult-chow-reduction",
            "Chow-side composite reduces to zero inside the tautological closure",
            anchor,
            value.is_zero(),
            value.render(),
        ),
        Err(violation) => CheckEntry::skipped(
            "mult-chow-reduction",
            "Chow-side composite reduces to zero inside the tautological closure",
            anchor,
            violation.to_string(),
        ),
    });
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EngineConfig;
    use crate::fano::RelationCoefficients;
    use crate::grassmann::{self, GrassmannRing};
    use crate::report::CheckStatus;

    fn models() -> (Arc<CohomModel>, Arc<CohomModel>) {
        let cfg = EngineConfig::default();
        let g4 = Scalar::from_int(108);
        (
            CohomModel::fano_square(&cfg, &g4).unwrap(),
            CohomModel::fano(&cfg, &g4).unwrap(),
        )
    }

    fn square() -> FanoSquareRing {
        let gr = GrassmannRing::new();
        let numbers = grassmann::fano_intersection_numbers(&gr);
        FanoSquareRing::build(
            &numbers,
            &RelationCoefficients::builtin(),
            &Scalar::from_int(3),
            true,
        )
        .unwrap()
    }

    #[test]
    fn diagonal_is_the_identity_correspondence() {
        let (model, single) = models();
        let diag = cohom::diagonal_class(&model).unwrap();
        assert!(compose(&diag, &diag).eq_class(&diag));
        // and it acts as the identity on all modeled classes
        for d in 0..=4u32 {
            for m in single.monomials(d) {
                let x = CohomClass::from_terms(&single, d, vec![(m, Scalar::one())]);
                assert!(apply(&diag, &x, &single).eq_class(&x));
            }
        }
    }

    #[test]
    fn pi0_composition_degree_bookkeeping() {
        // compose(l1^2, l1^2) = 575 l1^2, i.e. pi0 is idempotent through
        // the degree of the form dual
        let (model, _) = models();
        let b1 = CohomClass::letter(&model, "b1");
        let l1sq = b1.pow(2);
        let composed = compose(&l1sq, &l1sq);
        assert!(composed.eq_class(&l1sq.scale(&Scalar::from_int(575))));
    }

    #[test]
    fn transpose_rules() {
        let (model, _) = models();
        let pis = ck_projectors(&model);
        assert!(pis[0].transpose().class.eq_class(&pis[4].class));
        let inc_like = CohomClass::letter(&model, "B");
        assert!(inc_like.transpose().eq_class(&inc_like));
        // contravariance: (a ∘ b)^t = b^t ∘ a^t
        let a = &pis[1].class;
        let b = &pis[2].class;
        let lhs = compose(a, b).transpose();
        let rhs = compose(&b.transpose(), &a.transpose());
        assert!(lhs.eq_class(&rhs));
    }

    #[test]
    fn ck_suite_passes() {
        let (model, single) = models();
        let entries = verify_ck_suite(&model, &single);
        assert_eq!(entries.len(), 5 + 20 + 1 + 5 + 1 + 1 + 1);
        for e in &entries {
            assert_eq!(e.status, CheckStatus::Pass, "{} failed: {}", e.id, e.residual);
        }
    }

    #[test]
    fn multiplicativity_shadow_and_chow_skip() {
        let (model, single) = models();
        let sq = square();
        let entries = verify_multiplicativity(&model, &single, &sq, &Scalar::from_int(3));
        let by_id = |id: &str| entries.iter().find(|e| e.id == id).unwrap();
        assert_eq!(by_id("mult-shadow").status, CheckStatus::Pass);
        assert_eq!(by_id("mult-grade-transport").status, CheckStatus::Pass);
        assert_eq!(by_id("mult-fourier-partition").status, CheckStatus::Pass);
        // the Chow half runs into the relative-cube gap and must be
        // reported as skipped, not silently passed
        assert_eq!(by_id("mult-chow-reduction").status, CheckStatus::Skipped);
        assert!(by_id("mult-chow-reduction")
            .residual
            .contains("outside tautological closure"));
    }

    #[test]
    fn chow_composition_rules() {
        let sq = square();
        let three = Scalar::from_int(3);
        let f = &sq.fano;
        // diagonal is the identity: Delta ∘ Delta = Delta
        let delta = sq.gen_elem(sq.gens.delta);
        let dd = compose_chow(&sq, &delta, &delta, &three).unwrap();
        assert!(dd.eq_mod_relations(&delta));
        // Delta_*(gamma) composes multiplicatively
        let dg = sq.delta_star(&f.g_elem());
        let dgg = compose_chow(&sq, &dg, &dg, &three).unwrap();
        assert!(dgg.eq_mod_relations(&sq.delta_star(&f.gc_monomial(2, 0))));
        // incidence against the diagonal twists the source side
        let inc = sq.gen_elem(sq.gens.inc);
        let i_dg = compose_chow(&sq, &inc, &dg, &three).unwrap();
        let expected = inc
            .try_mul(&sq.embed(&f.g_elem(), 1))
            .unwrap()
            .normal_form();
        assert!(i_dg.eq_mod_relations(&expected));
        // two bare incidence factors: middle degree 0 -> closure violation
        assert!(compose_chow(&sq, &inc, &inc, &three).is_err());
        // incidence over a point-multiple middle stays tautological
        let i_pt = inc
            .try_mul(&sq.embed(&f.gc_monomial(4, 0), 2))
            .unwrap();
        let composed = compose_chow(&sq, &inc, &i_pt, &three).unwrap();
        let s = f.i_star(&f.point_class(), &three);
        let expected = sq
            .embed(&s, 1)
            .try_mul(&sq.embed(&s, 2))
            .unwrap()
            .scale(&Scalar::from_int(108))
            .normal_form();
        assert!(composed.eq_mod_relations(&expected));
    }

    #[test]
    fn chow_composition_matches_cohomology() {
        // on shapes where both sides are defined, the Chow composition maps
        // to the cohomological composition
        let (model, _) = models();
        let sq = square();
        let three = Scalar::from_int(3);
        let map = sq.cycle_map(&model).unwrap();
        let cases = [
            sq.delta_star(&sq.fano.g_elem()),
            sq.gen_elem(sq.gens.inc)
                .try_mul(&sq.embed(&sq.fano.g_elem(), 1))
                .unwrap(),
            sq.embed(&sq.fano.gc_monomial(2, 0), 1)
                .try_mul(&sq.embed(&sq.fano.gc_monomial(2, 0), 2))
                .unwrap(),
        ];
        for a in &cases {
            for b in &cases {
                let Ok(chow) = compose_chow(&sq, a, b, &three) else {
                    continue;
                };
                let coh = compose(&map.apply(a), &map.apply(b));
                assert!(map.apply(&chow).eq_class(&coh), "compose mismatch");
            }
        }
    }
}
