use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;

fn ctx4(order: usize) -> Context {
    Context::timelike(4, order).unwrap()
}

fn a0(ctx: &Context, c: GaussScalar, k: usize) -> AlgElement {
    AlgElement::a0_pow(ctx, c, k)
}

#[test]
fn weyl_relation_single() {
    let ctx = ctx4(3);
    let lhs = &AlgElement::d(&ctx, 0) * &AlgElement::x(&ctx, 0);
    let rhs = &AlgElement::monomial(&ctx, NormalMonomial::new(&[1], &[], &[1])) - &AlgElement::one(&ctx);
    assert_eq!(lhs, rhs);
}

#[test]
fn weyl_relation_square() {
    let ctx = ctx4(3);
    let x0 = AlgElement::x(&ctx, 0);
    let lhs = &AlgElement::d(&ctx, 0) * &(&x0 * &x0);
    let rhs = &AlgElement::monomial(&ctx, NormalMonomial::new(&[2], &[], &[1])) - &x0.scale_int(2);
    assert_eq!(lhs, rhs);
}

#[test]
fn weyl_relation_all_index_pairs() {
    let ctx = ctx4(2);
    for mu in 0..4 {
        for nu in 0..4 {
            let c = AlgElement::commutator(&AlgElement::d(&ctx, mu), &AlgElement::x(&ctx, nu));
            let expect = AlgElement::scalar(&ctx, GaussScalar::from_int(ctx.eta2(mu, nu)));
            assert_eq!(c, expect, "[d{mu}, x{nu}]");
        }
    }
}

#[test]
fn one_form_squares_vanish() {
    let ctx = ctx4(2);
    let two = &AlgElement::dx(&ctx, 0) * &AlgElement::dx(&ctx, 1);
    assert!((&two * &AlgElement::dx(&ctx, 0)).is_zero());
    let anti = &(&AlgElement::dx(&ctx, 1) * &AlgElement::dx(&ctx, 0)) + &two;
    assert!(anti.is_zero());
}

#[test]
fn bicrossproduct_x0_commutator() {
    let ctx = ctx4(3);
    let mut euler = AlgElement::zero(&ctx);
    for k in 1..4 {
        euler = &euler + &(&AlgElement::x(&ctx, k) * &AlgElement::d(&ctx, k));
    }
    let xhat0 = &AlgElement::x(&ctx, 0) + &(&a0(&ctx, GaussScalar::i(), 1) * &euler);
    for j in 1..4 {
        let c = AlgElement::graded_commutator(&xhat0, &AlgElement::x(&ctx, j)).unwrap();
        assert_eq!(c, &a0(&ctx, GaussScalar::i(), 1) * &AlgElement::x(&ctx, j));
    }
}

#[test]
fn odd_anticommutator_of_nilpotent() {
    let ctx = ctx4(2);
    let w = &AlgElement::dx(&ctx, 0) * &AlgElement::d(&ctx, 0);
    assert!(AlgElement::graded_commutator(&w, &w).unwrap().is_zero());
    for mu in 0..4 {
        for nu in 0..4 {
            let c = AlgElement::graded_commutator(&AlgElement::x(&ctx, mu), &AlgElement::x(&ctx, nu)).unwrap();
            assert!(c.is_zero());
        }
    }
}

#[test]
fn graded_commutator_rejects_mixed_parity() {
    let ctx = ctx4(2);
    let mixed = &AlgElement::one(&ctx) + &AlgElement::dx(&ctx, 1);
    let err = AlgElement::graded_commutator(&mixed, &AlgElement::x(&ctx, 0)).unwrap_err();
    assert_eq!(err, Error::MixedParity);
}

#[test]
fn lift_examples() {
    let ctx = ctx4(4);
    assert_eq!(AlgElement::lift_series_in_a(&ctx, &TruncSeries::one(4)), AlgElement::one(&ctx));
    let lifted_t = AlgElement::lift_series_in_a(&ctx, &TruncSeries::var(4));
    assert_eq!(lifted_t, &a0(&ctx, -GaussScalar::i(), 1) * &AlgElement::d(&ctx, 0));

    // exp(t) lifts to Σ (-i a0 ∂0)^k / k!
    let lifted = AlgElement::lift_series_in_a(&ctx, &TruncSeries::var(4).exp().unwrap());
    let mut expect = AlgElement::zero(&ctx);
    let mut fact = 1i64;
    for k in 0..=4usize {
        if k > 0 {
            fact *= k as i64;
        }
        let c = &GaussScalar::i_pow(-(k as i64)) / &GaussScalar::from_int(fact);
        let term = AlgElement::term(&ctx, NormalMonomial::d_pow(0, k as u16), TruncSeries::monomial(c, k, 4));
        expect = &expect + &term;
    }
    assert_eq!(lifted, expect);
    let second = lifted.coeff(&NormalMonomial::d_pow(0, 2)).unwrap();
    assert_eq!(second.coeff(2), &GaussScalar::from_ratio(-1, 2));
}

#[test]
fn geometric_substitution() {
    let ctx = ctx4(4);
    let e = &a0(&ctx, GaussScalar::one(), 1) * &AlgElement::d(&ctx, 1);
    let geom = TruncSeries::from_coeffs(vec![GaussScalar::one(); 5]);
    let got = AlgElement::substitute_series(&geom, &e).unwrap();
    let mut expect = AlgElement::zero(&ctx);
    for k in 0..=4u16 {
        expect = &expect
            + &AlgElement::term(&ctx, NormalMonomial::d_pow(1, k), TruncSeries::monomial(GaussScalar::one(), k as usize, 4));
    }
    assert_eq!(got, expect);
}

#[test]
fn radical_substitution_squares_back() {
    let ctx = ctx4(5);
    // E = -a0^2 (D·D) with a Minkowski square
    let mut dd = AlgElement::zero(&ctx);
    for mu in 0..4 {
        let dm = AlgElement::d(&ctx, mu);
        dd = &dd + &(&dm * &dm).scale_int(ctx.eta(mu));
    }
    let e = &a0(&ctx, -GaussScalar::one(), 2) * &dd;
    let mut one_plus_t = TruncSeries::one(5);
    *one_plus_t.coeff_mut(1) = GaussScalar::one();
    let root = AlgElement::substitute_series(&one_plus_t.sqrt().unwrap(), &e).unwrap();
    assert_eq!(&root * &root, &AlgElement::one(&ctx) + &e);
}

#[test]
fn substitution_rejects_coordinates() {
    let ctx = ctx4(3);
    let e = &AlgElement::x(&ctx, 0) * &a0(&ctx, GaussScalar::one(), 1);
    assert!(AlgElement::substitute_series(&TruncSeries::one(3), &e).is_err());
    let low = AlgElement::d(&ctx, 1);
    assert!(AlgElement::substitute_series(&TruncSeries::one(3), &low).is_err());
}

#[test]
fn divide_by_a0_examples() {
    let ctx = ctx4(3);
    let ax1 = &a0(&ctx, GaussScalar::one(), 1) * &AlgElement::x(&ctx, 1);
    let q = ax1.divide_by_a0(1).unwrap();
    assert_eq!(q, AlgElement::x(&ctx, 1).truncate(2));
    assert!(AlgElement::x(&ctx, 0).divide_by_a0(1).is_err());
}

#[test]
fn divide_one_minus_shift_inverse() {
    // (1 - e^{-A})/a0 with A = -i a0 ∂0: brute-force coefficients
    // (-1)^{k+1} (-i)^k / k! · a0^{k-1} ∂0^k.
    let n = 5;
    let ctx = ctx4(n);
    let e_minus = (-TruncSeries::var(n)).exp().unwrap();
    let f = &TruncSeries::one(n) - &e_minus;
    let got = AlgElement::lift_series_in_a(&ctx, &f).divide_by_a0(1).unwrap();
    let mut terms = BTreeMap::new();
    let mut fact = 1i64;
    for k in 1..=n {
        fact *= k as i64;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = &GaussScalar::i_pow(-(k as i64)).scale_int(sign) / &GaussScalar::from_int(fact);
        terms.insert(NormalMonomial::d_pow(0, k as u16), TruncSeries::monomial(c, k - 1, n - 1));
    }
    let expect = AlgElement::from_terms(&ctx, n - 1, terms);
    assert_eq!(got, expect);
    // leading term is -i ∂0
    let lead = got.coeff(&NormalMonomial::d(0)).unwrap();
    assert_eq!(lead.coeff(0), &-GaussScalar::i());
}

#[test]
fn vacuum_projection() {
    let ctx = ctx4(2);
    assert!((&AlgElement::x(&ctx, 1) * &AlgElement::d(&ctx, 0)).vacuum_project().is_zero());
    let v = &AlgElement::scalar(&ctx, GaussScalar::from_int(3)) + &AlgElement::x(&ctx, 0);
    assert_eq!(v.vacuum_project(), v);
}

#[test]
fn act_on_requires_derivative_free() {
    let ctx = ctx4(2);
    assert!(AlgElement::x(&ctx, 0).act_on(&AlgElement::d(&ctx, 1)).is_err());
    let r = AlgElement::d(&ctx, 1).act_on(&(&AlgElement::x(&ctx, 1) * &AlgElement::x(&ctx, 1))).unwrap();
    assert_eq!(r, AlgElement::x(&ctx, 1).scale_int(2));
}

#[test]
fn classical_limit_drops_a0() {
    let ctx = ctx4(3);
    let e = &AlgElement::x(&ctx, 0) + &(&a0(&ctx, GaussScalar::i(), 1) * &AlgElement::d(&ctx, 2));
    assert_eq!(e.classical_limit(), AlgElement::x(&ctx, 0));
}

#[test]
fn context_mismatch_is_reported() {
    let a = AlgElement::x(&ctx4(2), 0);
    let b = AlgElement::x(&Context::timelike(3, 2).unwrap(), 0);
    assert_eq!(a.try_mul(&b).unwrap_err(), Error::ContextMismatch);
}

// --- Independent oracle: operators acting on polynomials -------------------

type Poly = BTreeMap<[u16; MAX_DIM], GaussScalar>;

fn apply_monomial(m: &NormalMonomial, p: &Poly, dim: usize) -> Poly {
    let mut out = Poly::new();
    for (exp, c) in p {
        let mut e = *exp;
        let mut coeff = c.clone();
        let mut dead = false;
        for mu in 0..dim {
            for _ in 0..m.dexp()[mu] {
                if e[mu] == 0 {
                    dead = true;
                    break;
                }
                let eta = if mu == 0 { -1 } else { 1 };
                coeff = coeff.scale_int((e[mu] as i128) * eta);
                e[mu] -= 1;
            }
        }
        if dead {
            continue;
        }
        for mu in 0..dim {
            e[mu] += m.xexp()[mu];
        }
        let entry = out.entry(e).or_insert_with(GaussScalar::zero);
        *entry += &coeff;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn apply(e: &AlgElement, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, s) in e.terms() {
        let c = s.coeff(0);
        if c.is_zero() {
            continue;
        }
        for (k, v) in apply_monomial(m, p, e.ctx().dim()) {
            let entry = out.entry(k).or_insert_with(GaussScalar::zero);
            *entry += &(&v * c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn arb_exp(dim: usize, max: u16) -> impl Strategy<Value = Vec<u16>> {
    proptest::collection::vec(0..=max, dim)
}

fn arb_even_element(ctx: Context) -> impl Strategy<Value = AlgElement> {
    let dim = ctx.dim();
    proptest::collection::vec((arb_exp(dim, 2), arb_exp(dim, 2), -3i64..=3), 1..4).prop_map(move |terms| {
        let mut acc = AlgElement::zero(&ctx);
        for (x, d, c) in terms {
            let m = NormalMonomial::new(&x, &[], &d);
            acc = &acc + &AlgElement::term(&ctx, m, TruncSeries::constant(GaussScalar::from_int(c), ctx.order()));
        }
        acc
    })
}

fn arb_super_element(ctx: Context, parity: Option<u8>) -> impl Strategy<Value = AlgElement> {
    let dim = ctx.dim();
    proptest::collection::vec(
        (arb_exp(dim, 2), 0u16..(1 << dim), arb_exp(dim, 2), -2i64..=2, 0..=ctx.order()),
        1..4,
    )
    .prop_map(move |terms| {
        let mut acc = AlgElement::zero(&ctx);
        for (x, mut mask, d, c, k) in terms {
            if let Some(p) = parity {
                if (mask.count_ones() % 2) as u8 != p {
                    mask ^= 1;
                }
            }
            let dx: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
            let m = NormalMonomial::new(&x, &dx, &d);
            acc = &acc + &AlgElement::term(&ctx, m, TruncSeries::monomial(GaussScalar::from_int(c), k, ctx.order()));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_operator_composition(
        a in arb_even_element(Context::timelike(3, 1).unwrap()),
        b in arb_even_element(Context::timelike(3, 1).unwrap()),
        p in proptest::collection::vec((arb_exp(3, 3), -4i64..=4), 1..4),
    ) {
        let mut poly = Poly::new();
        for (e, c) in p {
            let mut k = [0u16; MAX_DIM];
            k[..3].copy_from_slice(&e);
            let entry = poly.entry(k).or_insert_with(GaussScalar::zero);
            *entry += &GaussScalar::from_int(c);
        }
        poly.retain(|_, c| !c.is_zero());
        let composed = apply(&a, &apply(&b, &poly));
        let product = apply(&(&a * &b), &poly);
        prop_assert_eq!(composed, product);
    }

    #[test]
    fn associativity(
        a in arb_super_element(Context::timelike(3, 2).unwrap(), None),
        b in arb_super_element(Context::timelike(3, 2).unwrap(), None),
        c in arb_super_element(Context::timelike(3, 2).unwrap(), None),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn parity_is_multiplicative(
        pa in 0u8..2, pb in 0u8..2,
        seed_a in arb_super_element(Context::timelike(3, 2).unwrap(), Some(0)),
        seed_b in arb_super_element(Context::timelike(3, 2).unwrap(), Some(0)),
    ) {
        let ctx = seed_a.ctx().clone();
        let a = if pa == 1 { &seed_a * &AlgElement::dx(&ctx, 2) } else { seed_a };
        let b = if pb == 1 { &AlgElement::dx(&ctx, 1) * &seed_b } else { seed_b };
        let prod = &a * &b;
        if !prod.is_zero() && !a.is_zero() && !b.is_zero() {
            let expect = if (pa + pb) % 2 == 0 { Parity::Even } else { Parity::Odd };
            prop_assert_eq!(prod.parity(), Some(expect));
        }
    }

    #[test]
    fn truncation_functoriality(
        a in arb_super_element(Context::timelike(3, 3).unwrap(), None),
        b in arb_super_element(Context::timelike(3, 3).unwrap(), None),
        lower in 0usize..=3,
    ) {
        prop_assert_eq!((&a * &b).truncate(lower), &a.truncate(lower) * &b.truncate(lower));
    }

    #[test]
    fn action_is_a_module_action(
        a in arb_even_element(Context::timelike(3, 1).unwrap()),
        b in arb_even_element(Context::timelike(3, 1).unwrap()),
        f in arb_super_element(Context::timelike(3, 1).unwrap(), None),
    ) {
        let f = f.vacuum_project();
        let lhs = a.act_on(&b.act_on(&f).unwrap()).unwrap();
        let rhs = (&a * &b).act_on(&f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
