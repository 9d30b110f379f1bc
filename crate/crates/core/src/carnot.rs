//! Exponential coordinates on `G = H^(k-1) x R`, the splitting `G = W V`
//! with `W = {x = 0, r = 0}` and `V = {y = 0, t = 0}`, and the intrinsic
//! graph of `φ(0, y, t, 0) = (0, 0, 0, u(t))`.
//!
//! Points are `(x, y, t, r)` with `x, y ∈ R^(k-1)`. The product is the
//! first-kind BCH law
//!
//! ```text
//! (x, y, t, r)(x', y', t', r') = (x + x', y + y', t + t' + (<x, y'> - <y, x'>) / 2, r + r')
//! ```
//!
//! so inverses are coordinate negation. The homogeneous norm is fixed as
//! `max(|x|, |y|, |t|^{1/2}, |r|)`, under which `|β(w)| <= ‖w‖^2` with
//! `β(0, y, t, 0) = t`, i.e. the cone constant is `C = 1`.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{dyadic_unit, exact_sqrt, int, sqrt_enclose, IntervalR, Rational};
use crate::selfsim::{standard_ifs, Ifs};

/// A point of `H^(k-1) x R`. Coordinates are intervals so that graph points,
/// whose last coordinate is only known as an enclosure of `u`, share the
/// same arithmetic; exact points use degenerate intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPoint {
    pub x: Vec<IntervalR>,
    pub y: Vec<IntervalR>,
    pub t: IntervalR,
    pub r: IntervalR,
}

impl GroupPoint {
    pub fn identity(k: usize) -> Self {
        let dim = k - 1;
        Self {
            x: vec![IntervalR::zero(); dim],
            y: vec![IntervalR::zero(); dim],
            t: IntervalR::zero(),
            r: IntervalR::zero(),
        }
    }

    pub fn exact(x: &[Rational], y: &[Rational], t: Rational, r: Rational) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(x.len(), y.len()));
        }
        if x.is_empty() {
            return Err(Error::InvalidParameter(
                "codimension k must be at least 2".into(),
            ));
        }
        Ok(Self {
            x: x.iter().cloned().map(IntervalR::point).collect(),
            y: y.iter().cloned().map(IntervalR::point).collect(),
            t: IntervalR::point(t),
            r: IntervalR::point(r),
        })
    }

    /// The point `(0, y, t, 0)` of `W`.
    pub fn in_w(y: &[Rational], t: Rational) -> Self {
        let zeros = vec![Rational::zero(); y.len()];
        Self::exact(&zeros, y, t, Rational::zero()).expect("matching dimensions")
    }

    /// `k`, the codimension of the graph.
    pub fn codim(&self) -> usize {
        self.x.len() + 1
    }

    fn x_is_zero(&self) -> bool {
        self.x
            .iter()
            .all(|c| c.as_point().is_some_and(Zero::is_zero))
    }

    pub fn is_in_w(&self) -> bool {
        self.x_is_zero() && self.r.as_point().is_some_and(Zero::is_zero)
    }

    pub fn is_exact(&self) -> bool {
        self.x.iter().chain(&self.y).all(IntervalR::is_point)
            && self.t.is_point()
            && self.r.is_point()
    }
}

fn dot(a: &[IntervalR], b: &[IntervalR]) -> IntervalR {
    a.iter()
        .zip(b)
        .fold(IntervalR::zero(), |acc, (p, q)| &acc + &(p * q))
}

pub fn mul(p: &GroupPoint, q: &GroupPoint) -> Result<GroupPoint> {
    if p.x.len() != q.x.len() {
        return Err(Error::DimensionMismatch(p.codim(), q.codim()));
    }
    let sum =
        |a: &[IntervalR], b: &[IntervalR]| a.iter().zip(b).map(|(u, v)| u + v).collect::<Vec<_>>();
    let twist = (&dot(&p.x, &q.y) - &dot(&p.y, &q.x)).scale(&Rational::new(1.into(), 2.into()));
    Ok(GroupPoint {
        x: sum(&p.x, &q.x),
        y: sum(&p.y, &q.y),
        t: &(&p.t + &q.t) + &twist,
        r: &p.r + &q.r,
    })
}

pub fn inv(p: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: p.x.iter().cloned().map(|c| -c).collect(),
        y: p.y.iter().cloned().map(|c| -c).collect(),
        t: -p.t.clone(),
        r: -p.r.clone(),
    }
}

/// `δ_λ(x, y, t, r) = (λx, λy, λ²t, λr)`
pub fn dilate(lambda: &Rational, p: &GroupPoint) -> Result<GroupPoint> {
    if !lambda.is_positive() {
        return Err(Error::NonPositiveLambda(lambda.clone()));
    }
    let sq = lambda * lambda;
    Ok(GroupPoint {
        x: p.x.iter().map(|c| c.scale(lambda)).collect(),
        y: p.y.iter().map(|c| c.scale(lambda)).collect(),
        t: p.t.scale(&sq),
        r: p.r.scale(lambda),
    })
}

fn euclidean(v: &[IntervalR], width: &Rational) -> Result<IntervalR> {
    if let [single] = v {
        return Ok(single.abs());
    }
    let sq = v
        .iter()
        .fold(IntervalR::zero(), |acc, c| &acc + &c.square());
    sq.sqrt(width)
}

/// `‖(x, y, t, r)‖ = max(|x|, |y|, |t|^{1/2}, |r|)`, enclosed.
pub fn hnorm(p: &GroupPoint, width: &Rational) -> Result<IntervalR> {
    let terms = [
        euclidean(&p.x, width)?,
        euclidean(&p.y, width)?,
        p.t.abs().sqrt(width)?,
        p.r.abs(),
    ];
    Ok(terms
        .iter()
        .skip(1)
        .fold(terms[0].clone(), |acc, t| acc.max(t)))
}

/// `β(0, y, t, 0) = t`.
pub fn beta(w: &GroupPoint) -> Result<Rational> {
    if !w.is_in_w() {
        return Err(Error::NotInW);
    }
    w.t.as_point()
        .cloned()
        .ok_or_else(|| Error::InvalidParameter("β needs an exact t coordinate".into()))
}

/// The splitting data for codimension `k`: `v0` spans the `r` axis and
/// commutes with `W`; `w0` is the unit of the `t` axis, `β(w0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub k: usize,
}

impl Splitting {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "codimension must be >= 2, got {k}"
            )));
        }
        Ok(Self { k })
    }

    pub fn v0(&self) -> GroupPoint {
        let zeros = vec![Rational::zero(); self.k - 1];
        GroupPoint::exact(&zeros, &zeros, Rational::zero(), Rational::one()).unwrap()
    }

    pub fn w0(&self) -> GroupPoint {
        GroupPoint::in_w(&vec![Rational::zero(); self.k - 1], Rational::one())
    }

    /// `C` with `|β(w)| <= C ‖w‖²` on `W`; exactly 1 for the max-norm.
    pub fn cone_constant(&self) -> Rational {
        Rational::one()
    }
}

/// `w φ(w) = (0, y, t, u(t))` with `u` extended evenly and 2-periodically.
pub fn graph_point(w: &GroupPoint, depth: u32) -> Result<GroupPoint> {
    graph_point_with(standard_ifs(), w, depth)
}

pub fn graph_point_with(ifs: &Ifs, w: &GroupPoint, depth: u32) -> Result<GroupPoint> {
    let t = beta(w)?;
    let mut p = w.clone();
    p.r = ifs.eval_u_extended(&t, depth)?;
    Ok(p)
}

fn sqrt_width(depth: u32) -> Rational {
    dyadic_unit(depth + 32)
}

/// For graph points `p, q`, splits `p⁻¹q = w v` with `w ∈ W`, `v ∈ V` and
/// encloses `√C ‖v0‖ ‖w‖ - ‖v‖`. Non-negative for every pair exactly when
/// the graph satisfies the Hölder estimate behind the cone property.
pub fn cone_gap(p: &GroupPoint, q: &GroupPoint, depth: u32) -> Result<IntervalR> {
    if !p.x_is_zero() || !q.x_is_zero() {
        return Err(Error::NotGraphPoints);
    }
    let d = mul(&inv(p), q)?;
    // x vanishes on both points, so the BCH twist is zero and the split is
    // coordinatewise.
    let w_part = GroupPoint {
        x: d.x.clone(),
        y: d.y.clone(),
        t: d.t.clone(),
        r: IntervalR::zero(),
    };
    let v_norm = d.r.abs();
    let splitting = Splitting::new(d.codim())?;
    let root_c = exact_sqrt(&splitting.cone_constant()).expect("C = 1");
    let w_norm = hnorm(&w_part, &sqrt_width(depth))?.scale(&root_c);
    Ok(&w_norm - &v_norm)
}

/// `λ (u(t̂ + h/λ²) - u(t̂))`, the `v0`-coefficient of `φ_{p̂,λ}(h w0)`.
pub fn blowup_profile(
    t_hat: &Rational,
    lambda: &Rational,
    h: &Rational,
    depth: u32,
) -> Result<IntervalR> {
    blowup_profile_with(standard_ifs(), t_hat, lambda, h, depth)
}

pub fn blowup_profile_with(
    ifs: &Ifs,
    t_hat: &Rational,
    lambda: &Rational,
    h: &Rational,
    depth: u32,
) -> Result<IntervalR> {
    if !lambda.is_positive() {
        return Err(Error::NonPositiveLambda(lambda.clone()));
    }
    if h.is_zero() {
        return Ok(IntervalR::zero());
    }
    let moved = ifs.eval_u_extended(&(t_hat + h / (lambda * lambda)), depth)?;
    let base = ifs.eval_u_extended(t_hat, depth)?;
    Ok((&moved - &base).scale(lambda))
}

/// The same coefficient through the quotient form
/// `sgn(h) |h|^{1/2} Δ(t̂ + h/λ², t̂)`.
pub fn blowup_profile_via_quotient(
    t_hat: &Rational,
    lambda: &Rational,
    h: &Rational,
    depth: u32,
) -> Result<IntervalR> {
    if !lambda.is_positive() {
        return Err(Error::NonPositiveLambda(lambda.clone()));
    }
    if h.is_zero() {
        return Ok(IntervalR::zero());
    }
    let q = standard_ifs().diff_quotient(&(t_hat + h / (lambda * lambda)), t_hat, depth)?;
    let root = sqrt_enclose(&h.abs(), &sqrt_width(depth))?;
    let signed = if h.is_negative() { -root } else { root };
    Ok(&signed * &q)
}

/// Samples `δ_λ(p̂⁻¹ Γ_φ)` over `grid ⊂ W`: each `w'` is pulled back to
/// `w = ŵ δ_{1/λ}(w')`, lifted to the graph and pushed forward again,
/// all through the group operations.
pub fn blowup_graph_sample(
    p_hat: &GroupPoint,
    lambda: &Rational,
    grid: &[GroupPoint],
    depth: u32,
) -> Result<Vec<GroupPoint>> {
    blowup_graph_sample_with(standard_ifs(), p_hat, lambda, grid, depth)
}

pub fn blowup_graph_sample_with(
    ifs: &Ifs,
    p_hat: &GroupPoint,
    lambda: &Rational,
    grid: &[GroupPoint],
    depth: u32,
) -> Result<Vec<GroupPoint>> {
    if !p_hat.x_is_zero() {
        return Err(Error::NotGraphPoints);
    }
    if !lambda.is_positive() {
        return Err(Error::NonPositiveLambda(lambda.clone()));
    }
    let mut w_hat = p_hat.clone();
    w_hat.r = IntervalR::zero();
    let p_inv = inv(p_hat);
    let shrink = lambda.recip();
    grid.par_iter()
        .map(|w_prime| {
            if !w_prime.is_in_w() {
                return Err(Error::NotInW);
            }
            let w = mul(&w_hat, &dilate(&shrink, w_prime)?)?;
            let q = graph_point_with(ifs, &w, depth)?;
            dilate(lambda, &mul(&p_inv, &q)?)
        })
        .collect()
}

const SOLVE_BASE_DEPTH: u32 = 40;
const SOLVE_MAX_DEPTH: u32 = 640;
const SOLVE_MAX_STEPS: usize = 400;

/// Outcome of evaluating `Δ(t̂ + s, t̂) - target` at one point.
enum Probe {
    Within,
    Above,
    Below,
    Unresolved,
}

/// With `accept_within` unset only a certified sign ends the search, which
/// is what bracket ends need when they cannot be returned themselves.
fn probe(
    ifs: &Ifs,
    t_hat: &Rational,
    s: &Rational,
    target: &Rational,
    tol: &Rational,
    accept_within: bool,
) -> Result<Probe> {
    let mut depth = SOLVE_BASE_DEPTH;
    loop {
        let q = ifs.diff_quotient(&(t_hat + s), t_hat, depth)?;
        let off = q.shift(&-target.clone());
        if accept_within && off.lo() >= &-tol.clone() && off.hi() <= tol {
            return Ok(Probe::Within);
        }
        if off.lo().is_positive() {
            return Ok(Probe::Above);
        }
        if off.hi().is_negative() {
            return Ok(Probe::Below);
        }
        if depth >= SOLVE_MAX_DEPTH {
            return Ok(Probe::Unresolved);
        }
        depth *= 2;
    }
}

/// Finds `s` with `sgn(s) = side` and `|Δ(t̂ + s, t̂) - target| <= tol`,
/// certified, by bisection between the bracket ends.
///
/// Bisection runs in `ρ = |s|^{1/2}` with rational `ρ`, so the returned
/// `|s|` is always a rational square and `λ = |s|^{-1/2}` is rational. An
/// endpoint that already meets the tolerance and is a square is returned
/// as is.
pub fn solve_quotient(
    t_hat: &Rational,
    target: &Rational,
    side: i8,
    bracket: (&Rational, &Rational),
    tol: &Rational,
) -> Result<Rational> {
    solve_quotient_with(standard_ifs(), t_hat, target, side, bracket, tol)
}

pub fn solve_quotient_with(
    ifs: &Ifs,
    t_hat: &Rational,
    target: &Rational,
    side: i8,
    bracket: (&Rational, &Rational),
    tol: &Rational,
) -> Result<Rational> {
    if side != 1 && side != -1 {
        return Err(Error::InvalidParameter(format!(
            "side must be ±1, got {side}"
        )));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let sign = int(side as i64);
    let (a, b) = bracket;
    for end in [a, b] {
        if (end * &sign).is_negative() || end.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "bracket end {end} is not on side {side}"
            )));
        }
    }
    let (mut lo, mut hi) = {
        let (ma, mb) = (a.abs(), b.abs());
        if ma <= mb {
            (ma, mb)
        } else {
            (mb, ma)
        }
    };
    let signed = |m: &Rational| m * &sign;
    let mut ends = Vec::with_capacity(2);
    for m in [&lo, &hi] {
        let square = exact_sqrt(m).is_some();
        let p = probe(ifs, t_hat, &signed(m), target, tol, square)?;
        if matches!(p, Probe::Within) {
            return Ok(signed(m));
        }
        ends.push(p);
    }
    let (lo_probe, hi_probe) = (&ends[0], &ends[1]);
    let lo_above = match (lo_probe, hi_probe) {
        (Probe::Above, Probe::Below) => true,
        (Probe::Below, Probe::Above) => false,
        _ => {
            return Err(Error::NotBracketed {
                target: target.clone(),
            })
        }
    };
    for _ in 0..SOLVE_MAX_STEPS {
        // a rational ρ strictly between √lo and √hi
        let w = (&hi - &lo) / (int(8) * (int(1) + &hi));
        let r1 = sqrt_enclose(&lo, &w)?.hi().clone();
        let r2 = sqrt_enclose(&hi, &w)?.lo().clone();
        let rho = (r1 + r2) / int(2);
        let m = &rho * &rho;
        match probe(ifs, t_hat, &signed(&m), target, tol, true)? {
            Probe::Within => return Ok(signed(&m)),
            Probe::Above if lo_above => lo = m,
            Probe::Below if !lo_above => lo = m,
            Probe::Above | Probe::Below => hi = m,
            Probe::Unresolved => return Err(Error::TolTooTight { tol: tol.clone() }),
        }
    }
    Err(Error::TolTooTight { tol: tol.clone() })
}
