//! Verification campaigns. Each one checks a family of inequalities with
//! exact rationals or certified intervals and returns a [`Report`].
//!
//! A check either passes, fails, or is inconclusive; inconclusive checks
//! are recorded as failures, so `certified` means every single verdict was
//! decided.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::carnot::{
    blowup_graph_sample_with, blowup_profile_with, cone_gap, graph_point_with, hnorm, inv, mul,
    solve_quotient_with, GroupPoint,
};
use crate::error::{Error, Result};
use crate::numerics::{
    cmp_abs_sq, dyadic_unit, int, pow, rat, sign_of, to_decimal, IntervalR, Rational,
};
use crate::selfsim::{c1, d1, d2, reduce_domain, Ifs, PiecewiseLinear};

/// Width used for the `d2` enclosure in every campaign.
pub fn d2_width() -> Rational {
    dyadic_unit(64)
}

/// At most this many failure records are kept; `failure_count` has the
/// total.
pub const MAX_FAILURE_RECORDS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub item: String,
    pub reason: String,
}

impl Failure {
    fn new(item: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            item: item.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub campaign: String,
    pub parameters: BTreeMap<String, String>,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub certified: bool,
    /// Derived quantities worth reading off the run (bounds, minima).
    pub summary: BTreeMap<String, String>,
    pub wall_time_s: f64,
}

impl Report {
    fn build(
        campaign: &str,
        parameters: BTreeMap<String, String>,
        checked: u64,
        mut failures: Vec<Failure>,
        summary: BTreeMap<String, String>,
        started: Instant,
    ) -> Self {
        failures.sort();
        let failure_count = failures.len() as u64;
        failures.truncate(MAX_FAILURE_RECORDS);
        Self {
            campaign: campaign.to_string(),
            parameters,
            checked,
            certified: failure_count == 0,
            failures,
            failure_count,
            summary,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }

    /// Zeroes the timing so reports of identical runs compare equal.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_s = 0.0;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Size limits checked before a campaign starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_level: u32,
    pub max_pairs: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_level: 10,
            max_pairs: 5_000_000,
        }
    }
}

/// `u_n` vertices plus `refine` equispaced points inside every segment.
pub fn refined_grid(pl: &PiecewiseLinear, refine: u32) -> Vec<(Rational, Rational)> {
    let pts = pl.points();
    let mut out = Vec::with_capacity(pts.len() * (refine as usize + 1));
    for pair in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (&pair[0], &pair[1]);
        out.push((x0.clone(), y0.clone()));
        for j in 1..=refine {
            let f = rat(j as i64, refine as i64 + 1);
            out.push((x0 + (x1 - x0) * &f, y0 + (y1 - y0) * &f));
        }
    }
    out.extend(pts.last().cloned());
    out
}

/// Exact sweep of `(u(s) - u(t))^2 <= |s - t|` over every pair of the given
/// vertices. A finite-grid necessary condition, not a proof of the bound on
/// the continuum.
pub fn holder_pairs(points: &[(Rational, Rational)]) -> (u64, Vec<Failure>) {
    let n = points.len();
    let failures: Vec<Failure> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (s, us) = &points[i];
            points[i + 1..]
                .iter()
                .filter(move |(t, ut)| cmp_abs_sq(&(us - ut), &(s - t)) == Ordering::Greater)
                .map(move |(t, ut)| {
                    Failure::new(
                        format!("({s}, {t})"),
                        format!("(u(s) - u(t))^2 = {} > |s - t|", (us - ut) * (us - ut)),
                    )
                })
        })
        .collect();
    let checked = (n as u64) * (n as u64).saturating_sub(1) / 2;
    (checked, failures)
}

fn check_pairs_cap(points: usize, caps: &Caps) -> Result<()> {
    let pairs = (points as u128) * (points as u128).saturating_sub(1) / 2;
    if pairs > caps.max_pairs {
        return Err(Error::InvalidParameter(format!(
            "{pairs} pairs exceed the cap of {}",
            caps.max_pairs
        )));
    }
    Ok(())
}

fn check_level_cap(n: u32, caps: &Caps) -> Result<()> {
    if n > caps.max_level {
        let needed = 3u128.checked_pow(n).map(|p| p + 1).unwrap_or(u128::MAX);
        return Err(Error::DepthTooLarge {
            level: n,
            needed,
            cap: 3u128.pow(caps.max_level) + 1,
        });
    }
    Ok(())
}

/// Hölder sweep over the (refined) vertices of `u_n`, plus the gluing
/// conditions of the function system.
pub fn verify_holder(ifs: &Ifs, n: u32, refine: u32, caps: &Caps) -> Result<Report> {
    let started = Instant::now();
    check_level_cap(n, caps)?;
    let points_needed = (3usize.pow(n)) * (refine as usize + 1) + 1;
    check_pairs_cap(points_needed, caps)?;
    let mut failures: Vec<Failure> = ifs
        .joint_defects()
        .into_iter()
        .map(|d| Failure::new("gluing", d))
        .collect();
    let (checked, pair_failures) = match ifs.iterate(n) {
        Ok(un) => holder_pairs(&refined_grid(&un, refine)),
        Err(e) => (0, vec![Failure::new(format!("u_{n}"), e.to_string())]),
    };
    failures.extend(pair_failures);
    let mut summary = BTreeMap::new();
    summary.insert(
        "scope".into(),
        "finite-grid necessary condition; the continuum bound follows from the inductive argument"
            .into(),
    );
    summary.insert("points".into(), points_needed.to_string());
    Ok(Report::build(
        "holder",
        params([("level", n.to_string()), ("refine", refine.to_string())]),
        checked,
        failures,
        summary,
        started,
    ))
}

/// The same sweep on an arbitrary piecewise linear function.
pub fn verify_holder_points(pl: &PiecewiseLinear, refine: u32, caps: &Caps) -> Result<Report> {
    let started = Instant::now();
    let grid = refined_grid(pl, refine);
    check_pairs_cap(grid.len(), caps)?;
    let (checked, failures) = holder_pairs(&grid);
    Ok(Report::build(
        "holder",
        params([
            ("points", grid.len().to_string()),
            ("refine", refine.to_string()),
        ]),
        checked,
        failures,
        BTreeMap::new(),
        started,
    ))
}

/// Checks the four lines of the oscillation condition for one witness:
/// same side, `lower <= |s_i - t0| <= upper`, certified gap `>= d2`.
fn witness_failures(
    item: &str,
    t0: &Rational,
    s: [&Rational; 2],
    gap: &IntervalR,
    lower: &Rational,
    upper: &Rational,
    d2: &IntervalR,
) -> Vec<Failure> {
    let mut out = Vec::new();
    let sides = [sign_of(&(s[0] - t0)), sign_of(&(s[1] - t0))];
    if sides[0] != sides[1] || sides[0] == 0 {
        out.push(Failure::new(
            item,
            format!("witnesses on different sides: {sides:?}"),
        ));
    }
    for si in s {
        let dist = (si - t0).abs();
        if &dist < lower || &dist > upper {
            out.push(Failure::new(
                item,
                format!("|{si} - {t0}| = {dist} outside [{lower}, {upper}]"),
            ));
        }
    }
    if gap.lo() < d2.hi() {
        let verdict = if gap.hi() < d2.lo() {
            "gap below d2"
        } else {
            "inconclusive gap"
        };
        out.push(Failure::new(item, format!("{verdict}: {gap}")));
    }
    out
}

fn min_of<'a>(xs: impl Iterator<Item = &'a Rational>) -> Option<Rational> {
    xs.min().cloned()
}

/// Unit-scale oscillation: on `grid_size` equispaced `t0 ∈ [0, 1]`, the
/// witnesses are at distance `>= d1 = 1/18` on one side and their
/// quotients differ by at least `d2`.
pub fn verify_claim2(ifs: &Ifs, grid_size: u32, depth: u32) -> Result<Report> {
    let started = Instant::now();
    if grid_size == 0 {
        return Err(Error::InvalidParameter(
            "grid size must be at least 1".into(),
        ));
    }
    let d2 = d2(&d2_width());
    let denom = (grid_size.max(2) - 1) as i64;
    let results: Vec<(Vec<Failure>, Option<Rational>)> = (0..grid_size as i64)
        .into_par_iter()
        .map(|i| {
            let t0 = rat(i, denom);
            let item = format!("t0={t0}");
            match ifs.claim2_witnesses(&t0, depth) {
                Ok(w) => (
                    witness_failures(&item, &t0, [&w.s1, &w.s2], &w.gap, &d1(), &int(1), &d2),
                    Some(w.gap.lo().clone()),
                ),
                Err(e) => (vec![Failure::new(item, e.to_string())], None),
            }
        })
        .collect();
    let min_gap = min_of(results.iter().filter_map(|r| r.1.as_ref()));
    let failures = results.into_iter().flat_map(|r| r.0).collect();
    let mut summary = BTreeMap::new();
    summary.insert("d1".into(), d1().to_string());
    summary.insert("d2_lower".into(), to_decimal(d2.lo(), 12));
    summary.insert("d2_upper".into(), to_decimal(d2.hi(), 12));
    if let Some(g) = min_gap {
        summary.insert("min_gap_lower".into(), to_decimal(&g, 12));
    }
    Ok(Report::build(
        "claim2",
        params([
            ("grid", grid_size.to_string()),
            ("depth", depth.to_string()),
        ]),
        grid_size as u64,
        failures,
        summary,
        started,
    ))
}

/// Deterministic `(t, δ)` samples: `t = k / 10^6` uniform, `δ = 9^-j` with
/// `j` uniform in `1..=8`.
pub fn claim3_samples(count: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = rat(rng.gen_range(0..=1_000_000), 1_000_000);
            let j = rng.gen_range(1..=8u32);
            (t, pow(&rat(1, 9), j))
        })
        .collect()
}

/// Oscillation at every scale: at each `(t, δ)`, the pushed-forward
/// witnesses sit in `[c1 δ, δ]` with `c1 = 1/162` on one side of `t` and
/// their quotients differ by at least `d2`. Also checks that the quotients
/// at `t` are the unit-cell quotients times the cell orientation.
pub fn verify_claim3(ifs: &Ifs, samples: &[(Rational, Rational)], depth: u32) -> Result<Report> {
    let started = Instant::now();
    let d2 = d2(&d2_width());
    let results: Vec<(Vec<Failure>, Option<Rational>)> = samples
        .par_iter()
        .map(|(t, delta)| {
            let item = format!("t={t}, delta={delta}");
            let run = || -> Result<(Vec<Failure>, Rational)> {
                let (cell, w) = ifs.claim3_witnesses(t, delta, depth)?;
                let mut fails = witness_failures(
                    &item,
                    t,
                    [&w.s1, &w.s2],
                    &w.gap,
                    &(c1() * delta),
                    delta,
                    &d2,
                );
                let t0 = cell.map.invert(t);
                let base = ifs.claim2_witnesses(&t0, depth)?;
                let sigma = int(cell.orientation as i64);
                for (at_t, at_t0) in [(&w.delta1, &base.delta1), (&w.delta2, &base.delta2)] {
                    if !(at_t - &at_t0.scale(&sigma)).contains_zero() {
                        fails.push(Failure::new(
                            &item,
                            format!("quotient not preserved: {at_t} vs σ·{at_t0}"),
                        ));
                    }
                }
                Ok((fails, w.gap.lo().clone()))
            };
            match run() {
                Ok((f, g)) => (f, Some(g)),
                Err(e) => (vec![Failure::new(item, e.to_string())], None),
            }
        })
        .collect();
    let min_gap = min_of(results.iter().filter_map(|r| r.1.as_ref()));
    let failures = results.into_iter().flat_map(|r| r.0).collect();
    let mut summary = BTreeMap::new();
    summary.insert("c1".into(), c1().to_string());
    summary.insert("c2_lower".into(), to_decimal(d2.lo(), 12));
    if let Some(g) = min_gap {
        summary.insert("min_gap_lower".into(), to_decimal(&g, 12));
    }
    Ok(Report::build(
        "claim3",
        params([
            ("samples", samples.len().to_string()),
            ("depth", depth.to_string()),
        ]),
        samples.len() as u64,
        failures,
        summary,
        started,
    ))
}

/// One certified oscillation window of `s -> Δ(t̂ + s, t̂)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OscillationWindow {
    pub t_hat: String,
    pub delta: String,
    pub s1: String,
    pub s2: String,
    pub osc_lower_bound: String,
    pub certified: bool,
}

/// For each `δ`, the witnesses at scale `δ` around `t̂` (reduced to
/// `[0, 1]`) give two quotient values with `|s| ∈ [c1 δ, δ]` that differ by
/// at least `d2`; so `Δ(t̂ + s, t̂)` has no limit as `s -> 0`.
pub fn oscillation_scan(
    ifs: &Ifs,
    t_hat: &Rational,
    deltas: &[Rational],
    depth: u32,
) -> Result<Vec<OscillationWindow>> {
    let t = reduce_domain(t_hat);
    let d2 = d2(&d2_width());
    deltas
        .par_iter()
        .map(|delta| {
            let (_, w) = ifs.claim3_witnesses(&t, delta, depth)?;
            let fails =
                witness_failures("", &t, [&w.s1, &w.s2], &w.gap, &(c1() * delta), delta, &d2);
            Ok(OscillationWindow {
                t_hat: t_hat.to_string(),
                delta: delta.to_string(),
                s1: (&w.s1 - &t).to_string(),
                s2: (&w.s2 - &t).to_string(),
                osc_lower_bound: to_decimal(w.gap.lo(), 12),
                certified: fails.is_empty(),
            })
        })
        .collect()
}

pub fn verify_oscillation(
    ifs: &Ifs,
    t_hats: &[Rational],
    deltas: &[Rational],
    depth: u32,
) -> Result<Report> {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut min_osc: Option<String> = None;
    for t_hat in t_hats {
        for w in oscillation_scan(ifs, t_hat, deltas, depth)? {
            checked += 1;
            if !w.certified {
                failures.push(Failure::new(
                    format!("t_hat={}, delta={}", w.t_hat, w.delta),
                    "window not certified",
                ));
            }
            min_osc = Some(match min_osc {
                Some(m) if m <= w.osc_lower_bound => m,
                _ => w.osc_lower_bound.clone(),
            });
        }
    }
    let mut summary = BTreeMap::new();
    if let Some(m) = min_osc {
        summary.insert("min_osc_lower".into(), m);
    }
    let join = |xs: &[Rational]| {
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    Ok(Report::build(
        "oscillation",
        params([
            ("t_hats", join(t_hats)),
            ("deltas", join(deltas)),
            ("depth", depth.to_string()),
        ]),
        checked,
        failures,
        summary,
        started,
    ))
}

/// Symmetric Hausdorff distance between the parts of two samples whose
/// norm is certified `<= radius`, for the metric `d(p, q) = ‖p⁻¹q‖`.
pub fn hausdorff_distance(
    a: &[GroupPoint],
    b: &[GroupPoint],
    radius: &Rational,
    width: &Rational,
) -> Result<IntervalR> {
    let restrict = |set: &[GroupPoint]| -> Result<Vec<GroupPoint>> {
        let mut kept = Vec::new();
        for p in set {
            if hnorm(p, width)?.hi() <= radius {
                kept.push(p.clone());
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyAfterRestriction(radius.clone()));
        }
        Ok(kept)
    };
    let (a, b) = (restrict(a)?, restrict(b)?);
    let directed = |from: &[GroupPoint], to: &[GroupPoint]| -> Result<IntervalR> {
        let per_point: Vec<IntervalR> = from
            .par_iter()
            .map(|p| {
                let p_inv = inv(p);
                let mut best: Option<IntervalR> = None;
                for q in to {
                    let d = hnorm(&mul(&p_inv, q)?, width)?;
                    best = Some(match best {
                        Some(b) => b.min(&d),
                        None => d,
                    });
                }
                Ok(best.expect("nonempty"))
            })
            .collect::<Result<_>>()?;
        Ok(per_point
            .iter()
            .skip(1)
            .fold(per_point[0].clone(), |acc, d| acc.max(d)))
    };
    Ok(directed(&a, &b)?.max(&directed(&b, &a)?))
}

/// Parameters for [`blowup_divergence`].
#[derive(Debug, Clone)]
pub struct BlowupParams {
    pub t_hat: Rational,
    pub target1: Rational,
    pub target2: Rational,
    /// Scales `δ_j = 9^-j` for `j` in `0..levels`.
    pub levels: u32,
    pub radius: Rational,
    pub grid: Vec<GroupPoint>,
    pub depth: u32,
    pub tol: Rational,
}

impl BlowupParams {
    /// Grid `{(0, y, h, 0)}` with `y ∈ {-1/2, 0, 1/2}` and `h` on a
    /// step-1/8 grid of `[-1, 1]`.
    pub fn default_grid() -> Vec<GroupPoint> {
        let mut grid = Vec::new();
        for y in [rat(-1, 2), int(0), rat(1, 2)] {
            for h in -8..=8 {
                grid.push(GroupPoint::in_w(std::slice::from_ref(&y), rat(h, 8)));
            }
        }
        grid
    }

    pub fn new(t_hat: Rational, target1: Rational, target2: Rational) -> Self {
        Self {
            t_hat,
            target1,
            target2,
            levels: 4,
            radius: int(1),
            grid: Self::default_grid(),
            depth: 40,
            tol: rat(1, 1_000_000),
        }
    }
}

/// Per-level outcome of [`blowup_divergence`].
#[derive(Debug, Clone, Serialize)]
pub struct BlowupLevel {
    pub delta: String,
    pub lambda1: String,
    pub lambda2: String,
    pub profile1: IntervalR,
    pub profile2: IntervalR,
    pub profile_gap_lower: String,
    pub hausdorff: IntervalR,
}

/// Finds `s` on the witness side of `t̂`, inside the window of scale
/// `delta`, with `Δ(t̂ + s, t̂) = target` to within `tol`.
fn scale_for_target(
    ifs: &Ifs,
    t_hat: &Rational,
    target: &Rational,
    delta: &Rational,
    p: &BlowupParams,
) -> Result<Rational> {
    let (_, w) = ifs.claim3_witnesses(t_hat, delta, p.depth)?;
    let side = w.side;
    let lower = c1() * delta;
    let mut mags: Vec<Rational> = vec![(&w.s1 - t_hat).abs(), (&w.s2 - t_hat).abs()];
    const SCAN: i64 = 32;
    for k in 0..=SCAN {
        mags.push(&lower + (delta - &lower) * rat(k, SCAN));
    }
    mags.sort();
    mags.dedup();
    let sign = int(side as i64);
    let quotient = |m: &Rational| ifs.diff_quotient(&(t_hat + m * &sign), t_hat, p.depth);
    let values: Vec<IntervalR> = mags.iter().map(quotient).collect::<Result<_>>()?;
    // an exact hit on a square first, then any strict straddle
    for (m, q) in mags.iter().zip(&values) {
        if q.shift(&-target.clone()).abs().hi() <= &p.tol {
            if let Ok(s) = solve_quotient_with(
                ifs,
                t_hat,
                target,
                side,
                (&(m * &sign), &(m * &sign)),
                &p.tol,
            ) {
                return Ok(s);
            }
        }
    }
    for i in 0..mags.len() - 1 {
        let (a, b) = (&values[i], &values[i + 1]);
        let straddles =
            (a.hi() < target && b.lo() > target) || (a.lo() > target && b.hi() < target);
        if straddles {
            return solve_quotient_with(
                ifs,
                t_hat,
                target,
                side,
                (&(&mags[i] * &sign), &(&mags[i + 1] * &sign)),
                &p.tol,
            );
        }
    }
    Err(Error::NotBracketed {
        target: target.clone(),
    })
}

/// The profile at `h`, deepening the evaluation until its width is at most
/// `tol`: the `u` enclosure width gets multiplied by `λ`.
fn sharp_profile(
    ifs: &Ifs,
    t_hat: &Rational,
    lambda: &Rational,
    h: &Rational,
    p: &BlowupParams,
) -> Result<IntervalR> {
    let mut depth = p.depth;
    loop {
        let prof = blowup_profile_with(ifs, t_hat, lambda, h, depth)?;
        if prof.width() <= p.tol || depth >= 4 * p.depth + 64 {
            return Ok(prof);
        }
        depth += 16;
    }
}

/// Two sequences of blow-up scales `λ_j → ∞` along which the quotient at
/// `h = σ` is pinned to `target1` and `target2`. At every level the
/// rescaled graphs are sampled on the grid and compared: their profiles at
/// `h = σ` differ by about `|target1 - target2|` and their Hausdorff
/// distance on the ball is bounded below.
pub fn blowup_divergence(ifs: &Ifs, p: &BlowupParams) -> Result<(Report, Vec<BlowupLevel>)> {
    let started = Instant::now();
    if p.levels == 0 {
        return Err(Error::InvalidParameter("need at least one level".into()));
    }
    let t_hat = reduce_domain(&p.t_hat);
    let width = dyadic_unit(p.depth + 32);
    let p_hat = graph_point_with(
        ifs,
        &GroupPoint::in_w(&vec![int(0); p.grid[0].y.len()], t_hat.clone()),
        p.depth,
    )?;
    let expected = (&p.target1 - &p.target2).abs() - int(2) * &p.tol;
    let mut failures = Vec::new();
    let mut levels = Vec::new();
    for j in 0..p.levels {
        let delta = pow(&rat(1, 9), j);
        let item = format!("delta={delta}");
        let s1 = scale_for_target(ifs, &t_hat, &p.target1, &delta, p)?;
        let s2 = scale_for_target(ifs, &t_hat, &p.target2, &delta, p)?;
        let lambda = |s: &Rational| -> Rational {
            crate::numerics::exact_sqrt(&s.abs())
                .expect("solver returns squares")
                .recip()
        };
        let (l1, l2) = (lambda(&s1), lambda(&s2));
        let h = int(sign_of(&s1) as i64);
        let prof1 = sharp_profile(ifs, &t_hat, &l1, &h, p)?;
        let prof2 = sharp_profile(ifs, &t_hat, &l2, &h, p)?;
        let prof_gap = (&prof1 - &prof2).abs();
        if prof_gap.lo() < &expected {
            failures.push(Failure::new(
                &item,
                format!("profile gap {prof_gap} below {expected}"),
            ));
        }
        let sample1 = blowup_graph_sample_with(ifs, &p_hat, &l1, &p.grid, p.depth)?;
        let sample2 = blowup_graph_sample_with(ifs, &p_hat, &l2, &p.grid, p.depth)?;
        // the group-arithmetic samples must agree with the closed-form profile
        let at_h = GroupPoint::in_w(&vec![int(0); p.grid[0].y.len()], h.clone());
        for (prof, lam) in [(&prof1, &l1), (&prof2, &l2)] {
            let probe =
                blowup_graph_sample_with(ifs, &p_hat, lam, std::slice::from_ref(&at_h), p.depth)?;
            if !(&probe[0].r - prof).contains_zero() {
                failures.push(Failure::new(
                    &item,
                    format!("sample {} disagrees with profile {prof}", probe[0].r),
                ));
            }
        }
        let haus = hausdorff_distance(&sample1, &sample2, &p.radius, &width)?;
        if p.target1 != p.target2 && !haus.lo().is_positive() {
            failures.push(Failure::new(
                &item,
                format!("Hausdorff distance {haus} not certified positive"),
            ));
        }
        levels.push(BlowupLevel {
            delta: delta.to_string(),
            lambda1: l1.to_string(),
            lambda2: l2.to_string(),
            profile1: prof1,
            profile2: prof2,
            profile_gap_lower: to_decimal(prof_gap.lo(), 12),
            hausdorff: haus,
        });
    }
    let min_gap = levels
        .iter()
        .map(|l| l.profile_gap_lower.clone())
        .min()
        .unwrap_or_default();
    let min_haus = levels
        .iter()
        .map(|l| l.hausdorff.lo().clone())
        .min()
        .unwrap_or_else(Rational::zero);
    let mut summary = BTreeMap::new();
    summary.insert("min_profile_gap_lower".into(), min_gap);
    summary.insert("min_hausdorff_lower".into(), to_decimal(&min_haus, 12));
    let report = Report::build(
        "blowup-divergence",
        params([
            ("t_hat", p.t_hat.to_string()),
            ("target1", p.target1.to_string()),
            ("target2", p.target2.to_string()),
            ("levels", p.levels.to_string()),
            ("radius", p.radius.to_string()),
            ("grid_points", p.grid.len().to_string()),
            ("depth", p.depth.to_string()),
            ("tol", p.tol.to_string()),
        ]),
        p.levels as u64,
        failures,
        summary,
        started,
    );
    Ok((report, levels))
}

/// Draws a W point with `t` from a mix of breakpoints (exact `u` values) and
/// generic rationals.
fn sample_w(rng: &mut ChaCha8Rng, breakpoints: &[Rational]) -> (GroupPoint, bool) {
    let y = if rng.gen_bool(0.5) {
        int(0)
    } else {
        rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000))
    };
    let (t, exact) = if rng.gen_bool(0.25) {
        // breakpoints of u_4, moved by the symmetries of the extension
        let b = breakpoints[rng.gen_range(0..breakpoints.len())].clone();
        let shift = int(2 * rng.gen_range(-1..=1));
        let b = if rng.gen_bool(0.5) { -b } else { b };
        (b + shift, true)
    } else {
        (
            rat(rng.gen_range(-30_000..=30_000), rng.gen_range(1..=10_000)),
            false,
        )
    };
    (GroupPoint::in_w(&[y], t), exact)
}

/// Cone-property sweep on pseudo-random pairs of graph points.
///
/// Every pair must have `cone_gap >= -width(cone_gap)`; pairs that are
/// not strictly certified at `depth` are retried at `4 * depth`. Pairs
/// whose `u` values are exact also get the exact check
/// `(u(β(w)) - u(β(ŵ)))^2 <= |β(ŵ⁻¹ w)|`.
pub fn verify_cone(ifs: &Ifs, sample_count: usize, depth: u32, seed: u64) -> Result<Report> {
    let started = Instant::now();
    if sample_count == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let breakpoints: Vec<Rational> = ifs
        .iterate(4)?
        .points()
        .iter()
        .map(|p| p.0.clone())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(GroupPoint, GroupPoint, bool)> = (0..sample_count)
        .map(|i| {
            let (a, ea) = sample_w(&mut rng, &breakpoints);
            let (b, eb) = if i % 8 == 0 {
                // same β, different y
                let mut b = a.clone();
                b.y = vec![IntervalR::point(rat(rng.gen_range(-100..=100), 7))];
                (b, ea)
            } else {
                sample_w(&mut rng, &breakpoints)
            };
            (a, b, ea && eb)
        })
        .collect();

    #[derive(Default)]
    struct Tally {
        strict: u64,
        relaxed: u64,
        exact: u64,
    }
    let outcomes: Vec<(Vec<Failure>, Tally)> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (w_hat, w, _))| {
            let item = format!("pair {i}");
            let run = || -> Result<(Vec<Failure>, Tally)> {
                let mut fails = Vec::new();
                let mut tally = Tally::default();
                let mut gap = None;
                for d in [depth, 4 * depth] {
                    let p = graph_point_with(ifs, w_hat, d)?;
                    let q = graph_point_with(ifs, w, d)?;
                    let g = cone_gap(&p, &q, d)?;
                    let strict = !g.lo().is_negative();
                    if p.r.is_point() && q.r.is_point() && tally.exact == 0 {
                        tally.exact = 1;
                        let du = q.r.lo() - p.r.lo();
                        let dbeta = q.t.lo() - p.t.lo();
                        if cmp_abs_sq(&du, &dbeta) == Ordering::Greater {
                            fails.push(Failure::new(
                                &item,
                                format!("exact chain fails: Δu = {du}, Δβ = {dbeta}"),
                            ));
                        }
                    }
                    gap = Some(g);
                    if strict {
                        break;
                    }
                }
                let g = gap.expect("at least one depth");
                if !g.lo().is_negative() {
                    tally.strict += 1;
                } else if g.hi().is_negative() {
                    fails.push(Failure::new(&item, format!("cone gap {g} is negative")));
                } else {
                    tally.relaxed += 1;
                }
                Ok((fails, tally))
            };
            run().unwrap_or_else(|e| (vec![Failure::new(item, e.to_string())], Tally::default()))
        })
        .collect();
    let mut tally = Tally::default();
    let mut failures = Vec::new();
    for (f, t) in outcomes {
        failures.extend(f);
        tally.strict += t.strict;
        tally.relaxed += t.relaxed;
        tally.exact += t.exact;
    }
    let mut summary = BTreeMap::new();
    summary.insert("strictly_certified".into(), tally.strict.to_string());
    summary.insert("within_enclosure_width".into(), tally.relaxed.to_string());
    summary.insert("exact_pairs".into(), tally.exact.to_string());
    Ok(Report::build(
        "cone",
        params([
            ("samples", sample_count.to_string()),
            ("depth", depth.to_string()),
            ("seed", seed.to_string()),
        ]),
        sample_count as u64,
        failures,
        summary,
        started,
    ))
}
