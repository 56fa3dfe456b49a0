//! Coproducts, antipodes and counits of the κ-Poincaré generators in the
//! noncovariant `(φ, ψ)` bases.
//!
//! Formulas are kept as [`HopfExpr`] trees; `Δ`, `S` and `ε` are evaluated
//! structurally and only the results are realized as elements or tensors.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::realization::{g_closed_form, RealizationSet};
use crate::report::Report;
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;
use crate::tensor::TensorElement;
use crate::weyl::{substitute_momentum, AlgElement, NormalMonomial};

/// A κ-Poincaré generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    P(usize),
    M(usize, usize),
    Z,
}

impl Generator {
    pub fn parse(name: &str, dim: usize) -> Result<Self> {
        let bad = || Error::UnknownName(name.into());
        let idx = |s: &str| -> Result<usize> {
            let k: usize = s.parse().map_err(|_| bad())?;
            if k < dim {
                Ok(k)
            } else {
                Err(bad())
            }
        };
        if name == "Z" {
            return Ok(Generator::Z);
        }
        if let Some(rest) = name.strip_prefix('p') {
            return Ok(Generator::P(idx(rest)?));
        }
        if let Some(rest) = name.strip_prefix('M') {
            if rest.len() == 2 {
                let (a, b) = (idx(&rest[..1])?, idx(&rest[1..])?);
                if a != b {
                    return Ok(Generator::M(a, b));
                }
            }
        }
        Err(bad())
    }

    /// `p_μ`, `M_{i0}`, `M_{ij}` (i < j) and `Z`.
    pub fn all(dim: usize) -> Vec<Generator> {
        let mut out: Vec<Generator> = (0..dim).map(Generator::P).collect();
        for i in 1..dim {
            out.push(Generator::M(i, 0));
        }
        for i in 1..dim {
            for j in (i + 1)..dim {
                out.push(Generator::M(i, j));
            }
        }
        out.push(Generator::Z);
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::P(mu) => write!(f, "p{mu}"),
            Generator::M(a, b) => write!(f, "M{a}{b}"),
            Generator::Z => f.write_str("Z"),
        }
    }
}

/// Symbolic expression over the generators.
#[derive(Clone, Debug)]
pub enum HopfExpr {
    /// A scalar series in `a0`.
    Scalar(TruncSeries),
    P(usize),
    M(usize, usize),
    Z,
    ZInv,
    /// `f(a0 p0)`.
    Func(TruncSeries),
    /// An arbitrary momentum-only element.
    Momentum(AlgElement),
    Sum(Vec<HopfExpr>),
    Prod(Vec<HopfExpr>),
}

impl From<Generator> for HopfExpr {
    fn from(g: Generator) -> Self {
        match g {
            Generator::P(mu) => HopfExpr::P(mu),
            Generator::M(a, b) => HopfExpr::M(a, b),
            Generator::Z => HopfExpr::Z,
        }
    }
}

/// `Σ left ⊗ right`.
pub type SymTensor = Vec<(HopfExpr, HopfExpr)>;

/// Realized ingredients shared by all Hopf maps of one basis.
pub struct HopfData {
    pub r: RealizationSet,
    /// `Δp_μ`.
    pub delta_p: Vec<TensorElement>,
    /// `S(p_μ)`.
    pub s_p: Vec<AlgElement>,
    /// `a0 Δp0`.
    t_delta: TensorElement,
    /// `S(a0 p0)`.
    s_a: AlgElement,
    order: usize,
}

fn lift(r: &RealizationSet, f: &TruncSeries) -> AlgElement {
    AlgElement::lift_series_in_a(r.p[0].ctx(), f)
}

impl HopfData {
    pub fn new(r: &RealizationSet) -> Result<Self> {
        let params = r.noncov_params()?.clone();
        let wc = r.p[0].ctx().clone();
        let w = wc.order();
        let dim = r.dim();
        let p_order = w + 1;
        let big_psi = params.big_psi().truncate(p_order);
        let psi_inv = params.big_psi_inverse().truncate(p_order);
        let phi = params.phi().truncate(p_order);
        let inv_phi = phi.recip()?;

        // a0 Δp0 = Ψ⁻¹(Ψ(A) ⊗ 1 + 1 ⊗ Ψ(A))
        let lifted = lift(r, &big_psi);
        let log_zz = &TensorElement::embed(&lifted, 0, 2)? + &TensorElement::embed(&lifted, 1, 2)?;
        let t_delta = TensorElement::substitute_series(&psi_inv, &log_zz)?;
        let mut delta_p = vec![t_delta.divide_by_a0(1)?];
        let phi_t = TensorElement::substitute_series(&phi, &t_delta)?;
        let zt = TensorElement::from_element(&r.z)?;
        let one = AlgElement::one(&wc);
        for i in 1..dim {
            let pi_phi = &r.p[i] * &lift(r, &inv_phi);
            let left = TensorElement::from_legs(&[&pi_phi, &one])?;
            let right = zt.kron(&TensorElement::from_element(&pi_phi)?)?;
            delta_p.push(&phi_t * &(&left + &right));
        }

        // h = Ψ⁻¹(-Ψ), S(a0 p0) = h(A)
        let h = psi_inv.compose(&-&big_psi)?;
        let s_a = lift(r, &h);
        let mut s_p = vec![s_a.divide_by_a0(1)?];
        let ratio = &(&phi.compose(&h)? * &inv_phi) * &params.z_pow(-1).truncate(p_order);
        for i in 1..dim {
            s_p.push(-&(&r.p[i] * &lift(r, &ratio)));
        }
        Ok(Self { r: r.clone(), delta_p, s_p, t_delta, s_a, order: r.order })
    }

    fn wc(&self) -> &crate::weyl::Context {
        self.r.p[0].ctx()
    }

    fn a0_scalar(&self, c: i64) -> HopfExpr {
        HopfExpr::Scalar(TruncSeries::monomial(GaussScalar::from_int(c), 1, self.wc().order()))
    }

    fn inv_phi(&self) -> Result<TruncSeries> {
        let params = self.r.noncov_params()?;
        params.phi().truncate(self.wc().order() + 1).recip()
    }

    /// `Δg` as a sum of pure tensors of expressions.
    pub fn coproduct_sym(&self, g: Generator) -> Result<SymTensor> {
        let one = || HopfExpr::Scalar(TruncSeries::one(self.wc().order()));
        Ok(match g {
            Generator::Z => vec![(HopfExpr::Z, HopfExpr::Z)],
            Generator::P(mu) => momentum_pairs(&self.delta_p[mu]),
            Generator::M(a, b) if a != 0 && b != 0 => vec![(HopfExpr::M(a, b), one()), (one(), HopfExpr::M(a, b))],
            Generator::M(i, 0) => {
                let mut out = vec![(HopfExpr::M(i, 0), one()), (HopfExpr::Z, HopfExpr::M(i, 0))];
                let f = HopfExpr::Func(self.inv_phi()?);
                for j in 1..self.r.dim() {
                    if j != i {
                        out.push((HopfExpr::Prod(vec![self.a0_scalar(-1), HopfExpr::P(j), f.clone()]), HopfExpr::M(i, j)));
                    }
                }
                out
            }
            Generator::M(0, i) => self
                .coproduct_sym(Generator::M(i, 0))?
                .into_iter()
                .map(|(l, r)| (HopfExpr::Prod(vec![HopfExpr::Scalar(TruncSeries::constant(-GaussScalar::one(), self.wc().order())), l]), r))
                .collect(),
            Generator::M(..) => return Err(Error::UnknownName(g.to_string())),
        })
    }

    /// Symbolic antipode of a generator.
    pub fn antipode_sym(&self, g: Generator) -> Result<HopfExpr> {
        let neg = || HopfExpr::Scalar(TruncSeries::constant(-GaussScalar::one(), self.wc().order()));
        Ok(match g {
            Generator::Z => HopfExpr::ZInv,
            Generator::P(mu) => HopfExpr::Momentum(self.s_p[mu].clone()),
            Generator::M(a, b) if a != 0 && b != 0 => HopfExpr::Prod(vec![neg(), HopfExpr::M(a, b)]),
            Generator::M(i, 0) => {
                let mut terms = vec![HopfExpr::Prod(vec![neg(), HopfExpr::ZInv, HopfExpr::M(i, 0)])];
                let f = HopfExpr::Func(self.inv_phi()?);
                for j in 1..self.r.dim() {
                    if j != i {
                        terms.push(HopfExpr::Prod(vec![self.a0_scalar(-1), HopfExpr::ZInv, HopfExpr::P(j), f.clone(), HopfExpr::M(i, j)]));
                    }
                }
                HopfExpr::Sum(terms)
            }
            Generator::M(0, i) => HopfExpr::Prod(vec![neg(), self.antipode_sym(Generator::M(i, 0))?]),
            Generator::M(..) => return Err(Error::UnknownName(g.to_string())),
        })
    }

    /// The element an expression denotes.
    pub fn realize(&self, e: &HopfExpr) -> Result<AlgElement> {
        let wc = self.wc();
        Ok(match e {
            HopfExpr::Scalar(s) => AlgElement::from_series(wc, s.clone()),
            HopfExpr::P(mu) => self.r.p[*mu].clone(),
            HopfExpr::M(a, b) => self.r.m[*a][*b].clone(),
            HopfExpr::Z => self.r.z.clone(),
            HopfExpr::ZInv => self.r.zinv.clone(),
            HopfExpr::Func(f) => lift(&self.r, f),
            HopfExpr::Momentum(m) => m.clone(),
            HopfExpr::Sum(xs) => {
                let mut acc = AlgElement::zero(wc);
                for x in xs {
                    acc = acc.try_add(&self.realize(x)?)?;
                }
                acc
            }
            HopfExpr::Prod(xs) => {
                let mut acc = AlgElement::one(wc);
                for x in xs {
                    acc = acc.try_mul(&self.realize(x)?)?;
                }
                acc
            }
        })
    }

    pub fn realize_sym(&self, t: &SymTensor) -> Result<TensorElement> {
        let mut acc = TensorElement::zero(self.wc(), 2, self.wc().order());
        for (a, b) in t {
            acc = acc.try_add(&TensorElement::from_legs(&[&self.realize(a)?, &self.realize(b)?])?)?;
        }
        Ok(acc)
    }

    /// `Δ` as an algebra morphism into the two-fold tensor product.
    pub fn delta(&self, e: &HopfExpr) -> Result<TensorElement> {
        let wc = self.wc();
        let w = wc.order();
        Ok(match e {
            HopfExpr::Scalar(s) => TensorElement::one(wc, 2, w).scale_series(s),
            HopfExpr::P(mu) => self.delta_p[*mu].clone(),
            HopfExpr::M(a, b) => self.realize_sym(&self.coproduct_sym(Generator::M(*a, *b))?)?,
            HopfExpr::Z => TensorElement::from_legs(&[&self.r.z, &self.r.z])?,
            HopfExpr::ZInv => TensorElement::from_legs(&[&self.r.zinv, &self.r.zinv])?,
            HopfExpr::Func(f) => TensorElement::substitute_series(f, &self.t_delta)?,
            HopfExpr::Momentum(m) => {
                let images: Vec<TensorElement> = self.delta_p.iter().map(|t| t.scale(&GaussScalar::i())).collect();
                substitute_momentum(m, &images)?
            }
            HopfExpr::Sum(xs) => {
                let mut acc = TensorElement::zero(wc, 2, w);
                for x in xs {
                    acc = acc.try_add(&self.delta(x)?)?;
                }
                acc
            }
            HopfExpr::Prod(xs) => {
                let mut acc = TensorElement::one(wc, 2, w);
                for x in xs {
                    acc = acc.try_mul(&self.delta(x)?)?;
                }
                acc
            }
        })
    }

    /// `S` as an algebra anti-morphism.
    pub fn antipode(&self, e: &HopfExpr) -> Result<AlgElement> {
        let wc = self.wc();
        Ok(match e {
            HopfExpr::Scalar(s) => AlgElement::from_series(wc, s.clone()),
            HopfExpr::P(mu) => self.s_p[*mu].clone(),
            HopfExpr::M(a, b) => self.realize(&self.antipode_sym(Generator::M(*a, *b))?)?,
            HopfExpr::Z => self.r.zinv.clone(),
            HopfExpr::ZInv => self.r.z.clone(),
            HopfExpr::Func(f) => AlgElement::substitute_series(f, &self.s_a)?,
            HopfExpr::Momentum(m) => {
                let images: Vec<AlgElement> = self.s_p.iter().map(|s| s.scale(&GaussScalar::i())).collect();
                substitute_momentum(m, &images)?
            }
            HopfExpr::Sum(xs) => {
                let mut acc = AlgElement::zero(wc);
                for x in xs {
                    acc = acc.try_add(&self.antipode(x)?)?;
                }
                acc
            }
            HopfExpr::Prod(xs) => {
                let mut acc = AlgElement::one(wc);
                for x in xs.iter().rev() {
                    acc = acc.try_mul(&self.antipode(x)?)?;
                }
                acc
            }
        })
    }

    /// `ε` as a morphism to scalar series.
    pub fn counit_expr(&self, e: &HopfExpr) -> TruncSeries {
        let w = self.wc().order();
        match e {
            HopfExpr::Scalar(s) => s.clone(),
            HopfExpr::P(_) | HopfExpr::M(..) => TruncSeries::zero(w),
            HopfExpr::Z | HopfExpr::ZInv => TruncSeries::one(w),
            HopfExpr::Func(f) => TruncSeries::constant(f.coeff(0).clone(), w),
            HopfExpr::Momentum(m) => m.unit_coeff(),
            HopfExpr::Sum(xs) => xs.iter().fold(TruncSeries::zero(w), |acc, x| aligned_add(&acc, &self.counit_expr(x))),
            HopfExpr::Prod(xs) => xs.iter().fold(TruncSeries::one(w), |acc, x| aligned_mul(&acc, &self.counit_expr(x))),
        }
    }

    /// `Δg` realized.
    pub fn coproduct(&self, g: Generator) -> Result<TensorElement> {
        match g {
            Generator::P(mu) => Ok(self.delta_p[mu].clone()),
            _ => self.realize_sym(&self.coproduct_sym(g)?),
        }
    }
}

fn aligned_add(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    let o = a.order().min(b.order());
    &a.truncate(o) + &b.truncate(o)
}

fn aligned_mul(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    let o = a.order().min(b.order());
    &a.truncate(o) * &b.truncate(o)
}

/// Splits a momentum tensor into pairs grouped by the right-leg monomial.
fn momentum_pairs(t: &TensorElement) -> SymTensor {
    let mut groups: std::collections::BTreeMap<NormalMonomial, AlgElement> = std::collections::BTreeMap::new();
    for (key, s) in t.terms() {
        let e = AlgElement::term(t.ctx(), key[0], s.clone());
        groups
            .entry(key[1])
            .and_modify(|acc| *acc = &*acc + &e)
            .or_insert(e);
    }
    groups
        .into_iter()
        .map(|(m, left)| {
            let right = AlgElement::term(t.ctx(), m, TruncSeries::one(t.order()));
            (HopfExpr::Momentum(left), HopfExpr::Momentum(right))
        })
        .collect()
}

/// `Δg` realized as a tensor.
pub fn coproduct(g: Generator, hd: &HopfData) -> Result<TensorElement> {
    hd.coproduct(g)?.try_truncate(hd.order)
}

/// `S(g)` realized.
pub fn antipode(g: Generator, hd: &HopfData) -> Result<AlgElement> {
    hd.antipode(&HopfExpr::from(g))?.try_truncate(hd.order)
}

/// Undeformed counits.
pub fn counit(g: Generator) -> GaussScalar {
    match g {
        Generator::Z => GaussScalar::one(),
        _ => GaussScalar::zero(),
    }
}

/// Coassociativity, counit and antipode axioms for one generator.
pub fn check_hopf_axioms(g: Generator, hd: &HopfData) -> Result<Report> {
    let mut rep = Report::new();
    let n = hd.order;
    let wc = hd.wc().clone();
    let pairs = hd.coproduct_sym(g)?;
    let gen = hd.realize(&HopfExpr::from(g))?;

    // (Δ ⊗ id)Δg = (id ⊗ Δ)Δg
    let mut lhs = TensorElement::zero(&wc, 3, wc.order());
    let mut rhs = TensorElement::zero(&wc, 3, wc.order());
    for (a, b) in &pairs {
        lhs = lhs.try_add(&hd.delta(a)?.kron(&TensorElement::from_element(&hd.realize(b)?)?)?)?;
        rhs = rhs.try_add(&TensorElement::from_element(&hd.realize(a)?)?.kron(&hd.delta(b)?)?)?;
    }
    let res = lhs.try_sub(&rhs)?.try_truncate(n)?;
    rep.check("hopf", format!("{g}: coassociativity"), res.is_zero(), || format!("residual: {}", res.render()));

    // (ε ⊗ id)Δg = g = (id ⊗ ε)Δg
    let mut left = AlgElement::zero(&wc);
    let mut right = AlgElement::zero(&wc);
    for (a, b) in &pairs {
        left = left.try_add(&hd.realize(b)?.scale_series(&hd.counit_expr(a)))?;
        right = right.try_add(&hd.realize(a)?.scale_series(&hd.counit_expr(b)))?;
    }
    rep.identity("hopf", format!("{g}: (eps x id) coproduct"), &(&left - &gen).try_truncate(n)?);
    rep.identity("hopf", format!("{g}: (id x eps) coproduct"), &(&right - &gen).try_truncate(n)?);

    // m(S ⊗ id)Δg = ε(g) 1 = m(id ⊗ S)Δg
    let eps = AlgElement::scalar(&wc, counit(g));
    let mut left = AlgElement::zero(&wc);
    let mut right = AlgElement::zero(&wc);
    for (a, b) in &pairs {
        left = left.try_add(&hd.antipode(a)?.try_mul(&hd.realize(b)?)?)?;
        right = right.try_add(&hd.realize(a)?.try_mul(&hd.antipode(b)?)?)?;
    }
    rep.identity("hopf", format!("{g}: m(S x id) coproduct"), &(&left - &eps).try_truncate(n)?);
    rep.identity("hopf", format!("{g}: m(id x S) coproduct"), &(&right - &eps).try_truncate(n)?);

    // primitive classical limit
    let cop = hd.coproduct(g)?.try_truncate(n)?;
    let expect = match g {
        Generator::Z => TensorElement::one(&wc, 2, n),
        _ => {
            let gl = gen.try_truncate(n)?.classical_limit();
            &TensorElement::embed(&gl, 0, 2)? + &TensorElement::embed(&gl, 1, 2)?
        }
    };
    let res = &cop.classical_limit() - &expect;
    rep.check("hopf", format!("{g}: classical limit of coproduct"), res.is_zero(), || format!("residual: {}", res.render()));
    Ok(rep)
}

/// `Δ` and `S` respect `[M_{μν}, p_λ] = G_{μνλ}(p)`.
pub fn check_morphism_compat(hd: &HopfData) -> Result<Report> {
    let mut rep = Report::new();
    let n = hd.order;
    let dim = hd.r.dim();
    let g = g_closed_form(&hd.r)?;
    let boosts_and_rotations: Vec<(usize, usize)> =
        (1..dim).map(|i| (i, 0)).chain((1..dim).flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))).collect();
    for (a, b) in boosts_and_rotations {
        let dm = hd.delta(&HopfExpr::M(a, b))?;
        let sm = hd.antipode(&HopfExpr::M(a, b))?;
        for la in 0..dim {
            let gm = HopfExpr::Momentum(g[a][b][la].clone());
            let lhs = hd.delta(&gm)?;
            let dp = &hd.delta_p[la];
            let rhs = &(&dm * dp) - &(dp * &dm);
            let res = (&lhs - &rhs).try_truncate(n)?;
            rep.check("hopf", format!("coproduct of [M{a}{b}, p{la}]"), res.is_zero(), || format!("residual: {}", res.render()));
            let lhs = hd.antipode(&gm)?;
            let sp = &hd.s_p[la];
            let rhs = -&AlgElement::commutator(&sm, sp);
            rep.identity("hopf", format!("antipode of [M{a}{b}, p{la}]"), &(&lhs - &rhs).try_truncate(n)?);
        }
    }
    Ok(rep)
}

/// Group-likeness of `Z` through the momentum-function route, and
/// `S(Z) Z = 1`.
pub fn check_shift_grouplike(hd: &HopfData) -> Result<Report> {
    let mut rep = Report::new();
    let n = hd.order;
    let params = hd.r.noncov_params()?;
    let zf = HopfExpr::Func(params.z_pow(1).truncate(hd.wc().order() + 1));
    let via_series = hd.delta(&zf)?;
    let zz = TensorElement::from_legs(&[&hd.r.z, &hd.r.z])?;
    let res = (&via_series - &zz).try_truncate(n)?;
    rep.check("hopf", "Delta(exp(Psi(A))) = Z (x) Z", res.is_zero(), || format!("residual: {}", res.render()));
    let sz = hd.antipode(&HopfExpr::Z)?;
    rep.identity("hopf", "S(Z) Z = 1", &(&(&sz * &hd.r.z) - &AlgElement::one(hd.wc())).try_truncate(n)?);
    Ok(rep)
}

/// For `φ = ψ = 1`, compares against the closed bicrossproduct table.
pub fn check_bicrossproduct_table(hd: &HopfData) -> Result<Report> {
    let mut rep = Report::new();
    let n = hd.order;
    let r = &hd.r;
    let wc = hd.wc().clone();
    let one = AlgElement::one(&wc);
    let t = |a: &AlgElement, b: &AlgElement| TensorElement::from_legs(&[a, b]);
    let dim = r.dim();
    let cmp_t = |rep: &mut Report, name: String, got: TensorElement, want: TensorElement| -> Result<()> {
        let res = got.try_sub(&want)?.try_truncate(n)?;
        rep.check("hopf", name, res.is_zero(), || format!("residual: {}", res.render()));
        Ok(())
    };
    cmp_t(&mut rep, "table: Delta p0 = p0 (x) 1 + 1 (x) p0".into(), hd.coproduct(Generator::P(0))?, &t(&r.p[0], &one)? + &t(&one, &r.p[0])?)?;
    rep.identity("hopf", "table: S(p0) = -p0", &(&hd.antipode(&HopfExpr::P(0))? + &r.p[0]).try_truncate(n)?);
    for i in 1..dim {
        cmp_t(
            &mut rep,
            format!("table: Delta p{i} = p{i} (x) 1 + Z (x) p{i}"),
            hd.coproduct(Generator::P(i))?,
            &t(&r.p[i], &one)? + &t(&r.z, &r.p[i])?,
        )?;
        rep.identity(
            "hopf",
            format!("table: S(p{i}) = -Zinv p{i}"),
            &(&hd.antipode(&HopfExpr::P(i))? + &(&r.zinv * &r.p[i])).try_truncate(n)?,
        );
        let mut want = &t(&r.m[i][0], &one)? + &t(&r.z, &r.m[i][0])?;
        let mut s_want = -&(&r.zinv * &r.m[i][0]);
        for j in 1..dim {
            if j == i {
                continue;
            }
            let a0pj = r.p[j].mul_a0_pow(1);
            want = &want - &t(&a0pj, &r.m[i][j])?;
            s_want = &s_want - &(&(&r.zinv * &a0pj) * &r.m[i][j]);
            if j > i {
                cmp_t(
                    &mut rep,
                    format!("table: Delta M{i}{j} primitive"),
                    hd.coproduct(Generator::M(i, j))?,
                    &t(&r.m[i][j], &one)? + &t(&one, &r.m[i][j])?,
                )?;
                rep.identity(
                    "hopf",
                    format!("table: S(M{i}{j}) = -M{i}{j}"),
                    &(&hd.antipode(&HopfExpr::M(i, j))? + &r.m[i][j]).try_truncate(n)?,
                );
            }
        }
        cmp_t(&mut rep, format!("table: Delta M{i}0"), hd.coproduct(Generator::M(i, 0))?, want)?;
        rep.identity("hopf", format!("table: S(M{i}0)"), &(&hd.antipode(&HopfExpr::M(i, 0))? - &s_want).try_truncate(n)?);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_basis_table;
    use crate::realization::{build_noncov, required_param_order};
    use crate::weyl::Context;

    fn data(name: &str, dim: usize, order: usize) -> HopfData {
        let ctx = Context::timelike(dim, order).unwrap();
        let p = named_basis_table(name, required_param_order(order)).unwrap();
        HopfData::new(&build_noncov(&ctx, &p).unwrap()).unwrap()
    }

    fn ok(rep: Report) {
        assert!(!rep.is_empty());
        assert!(rep.passed(), "{}", rep.render_text());
    }

    #[test]
    fn generator_names() {
        assert_eq!(Generator::parse("M10", 4).unwrap(), Generator::M(1, 0));
        assert_eq!(Generator::parse("p3", 4).unwrap(), Generator::P(3));
        assert!(Generator::parse("p4", 4).is_err());
        assert!(Generator::parse("M11", 4).is_err());
        assert_eq!(Generator::all(3).len(), 3 + 2 + 1 + 1);
    }

    #[test]
    fn counits() {
        assert!(counit(Generator::P(0)).is_zero());
        assert!(counit(Generator::M(1, 0)).is_zero());
        assert!(counit(Generator::Z).is_one());
    }

    #[test]
    fn bicrossproduct_table_and_axioms() {
        let hd = data("bicrossproduct", 3, 2);
        ok(check_bicrossproduct_table(&hd).unwrap());
        for g in Generator::all(3) {
            ok(check_hopf_axioms(g, &hd).unwrap());
        }
        ok(check_morphism_compat(&hd).unwrap());
        ok(check_shift_grouplike(&hd).unwrap());
    }

    #[test]
    fn deformed_bases_low_order() {
        for name in ["left", "weyl-symmetric", "left-covariant", "right-covariant"] {
            let hd = data(name, 3, 2);
            for g in Generator::all(3) {
                ok(check_hopf_axioms(g, &hd).unwrap());
            }
            ok(check_morphism_compat(&hd).unwrap());
            ok(check_shift_grouplike(&hd).unwrap());
        }
    }

    #[test]
    fn table_fails_off_bicrossproduct() {
        let hd = data("right-covariant", 2, 2);
        assert!(!check_bicrossproduct_table(&hd).unwrap().passed());
    }

    #[test]
    fn natural_frame_is_rejected() {
        let ctx = Context::timelike(2, 2).unwrap();
        let r = crate::realization::build_natural(&ctx).unwrap();
        assert!(HopfData::new(&r).is_err());
    }
}
