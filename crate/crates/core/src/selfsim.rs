//! The self-affine function `u: [0, 1] -> [0, 1]`.
//!
//! `u` is the uniform limit of piecewise linear iterates `u_n`, where
//! `u_0(t) = t` and the graph of `u_{n+1}` is the union of three affine
//! copies of the graph of `u_n`:
//!
//! | branch | x-map            | y-map              |
//! |--------|------------------|--------------------|
//! | Left   | `4x/9`           | `2y/3`             |
//! | Mid    | `x/9 + 4/9`      | `-y/3 + 2/3`       |
//! | Right  | `4x/9 + 5/9`     | `2y/3 + 1/3`       |
//!
//! Every branch has `|y_scale|^2 = x_scale`, so the 1/2-Hölder difference
//! quotient `Δ(s, t) = (u(s) - u(t)) / (sgn(s - t) |s - t|^{1/2})` is
//! preserved by each branch up to the sign of `y_scale`.
//!
//! All evaluation is exact or returns a certified [`IntervalR`].

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{dyadic_unit, int, quotient_enclose, rat, sqrt_enclose, IntervalR, Rational};

/// Largest number of breakpoints [`iterate`] builds without an explicit cap
/// (`3^12 + 1`).
pub const DEFAULT_MAX_POINTS: u128 = 531_442;

/// Descent depth used when callers do not pick one. `(2/3)^48 < 4e-9`.
pub const DEFAULT_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BranchTag {
    Left,
    Mid,
    Right,
}

impl BranchTag {
    pub const ALL: [BranchTag; 3] = [BranchTag::Left, BranchTag::Mid, BranchTag::Right];

    fn index(self) -> usize {
        match self {
            BranchTag::Left => 0,
            BranchTag::Mid => 1,
            BranchTag::Right => 2,
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchTag::Left => "L",
            BranchTag::Mid => "M",
            BranchTag::Right => "R",
        })
    }
}

/// One affine map `(x, y) -> (x_scale x + x_offset, y_scale y + y_offset)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub tag: BranchTag,
    pub x_scale: Rational,
    pub x_offset: Rational,
    pub y_scale: Rational,
    pub y_offset: Rational,
}

impl Branch {
    pub fn map_x(&self, x: &Rational) -> Rational {
        &self.x_scale * x + &self.x_offset
    }

    pub fn map_y(&self, y: &Rational) -> Rational {
        &self.y_scale * y + &self.y_offset
    }

    pub fn unmap_x(&self, x: &Rational) -> Rational {
        (x - &self.x_offset) / &self.x_scale
    }

    /// Image of `[0, 1]` under the x-map, as `(left, right)`.
    pub fn x_image(&self) -> (Rational, Rational) {
        let a = self.x_offset.clone();
        let b = &self.x_scale + &self.x_offset;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn contains(&self, x: &Rational) -> bool {
        let (a, b) = self.x_image();
        &a <= x && x <= &b
    }

    pub fn x_map(&self) -> AffineMap1D {
        AffineMap1D {
            a: self.x_scale.clone(),
            b: self.x_offset.clone(),
        }
    }

    pub fn orientation(&self) -> i8 {
        if self.y_scale.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// `x -> a x + b`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineMap1D {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl AffineMap1D {
    pub fn identity() -> Self {
        Self {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.a * x + &self.b
    }

    pub fn invert(&self, y: &Rational) -> Rational {
        (y - &self.b) / &self.a
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &AffineMap1D) -> AffineMap1D {
        AffineMap1D {
            a: &self.a * &inner.a,
            b: &self.a * &inner.b + &self.b,
        }
    }
}

/// A word over the three branches. The empty word is the root cell `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Address(pub Vec<BranchTag>);

impl Address {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mid_count(&self) -> usize {
        self.0.iter().filter(|t| **t == BranchTag::Mid).count()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for tag in &self.0 {
            write!(f, "{tag}")?;
        }
        Ok(())
    }
}

/// An IFS cell reached by descending towards a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub address: Address,
    /// Abscissa map sending `[0, 1]` onto the cell.
    pub map: AffineMap1D,
    /// `(-1)^(number of Mid steps)`, or more generally the product of the
    /// y-scale signs along the word.
    pub orientation: i8,
}

impl Cell {
    pub fn length(&self) -> Rational {
        self.map.a.abs()
    }
}

/// Graph of a piecewise linear function on `[0, 1]` given by its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    /// Abscissas must be strictly increasing.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "piecewise linear function needs vertices".into(),
            ));
        }
        for pair in points.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidIfs(pair[1].0.clone()));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact value by linear interpolation. Outside the vertex range the
    /// function is undefined.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let first = &self.points[0].0;
        let last = &self.points[self.points.len() - 1].0;
        if t < first || t > last {
            return Err(Error::OutOfDomain(t.clone()));
        }
        match self.points.binary_search_by(|(x, _)| x.cmp(t)) {
            Ok(i) => Ok(self.points[i].1.clone()),
            Err(i) => {
                let (x0, y0) = &self.points[i - 1];
                let (x1, y1) = &self.points[i];
                Ok(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
            }
        }
    }

    /// `sup |self - other|`, attained at a vertex of one of the two.
    pub fn sup_distance(&self, other: &PiecewiseLinear) -> Result<Rational> {
        let mut best = Rational::zero();
        for (x, y) in &self.points {
            best = best.max((y - other.eval(x)?).abs());
        }
        for (x, y) in &other.points {
            best = best.max((y - self.eval(x)?).abs());
        }
        Ok(best)
    }

    /// Multiplies every value by `k`; used to build perturbed variants.
    pub fn scale_values(&self, k: &Rational) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|(x, y)| (x.clone(), y * k))
                .collect(),
        }
    }
}

/// Pair of comparison points for a base point `t0`, with the certified gap
/// between the two difference quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWitness {
    pub t0: Rational,
    pub s1: Rational,
    pub s2: Rational,
    /// Common value of `sgn(s1 - t0)` and `sgn(s2 - t0)`.
    pub side: i8,
    pub delta1: IntervalR,
    pub delta2: IntervalR,
    /// Enclosure of `|Δ(s1, t0) - Δ(s2, t0)|`; its lower end is the
    /// certified gap.
    pub gap: IntervalR,
}

/// The three-branch function system, by default the one defining `u`.
/// Kept as data so that perturbed systems can be fed through the same
/// evaluation and verification code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ifs {
    branches: [Branch; 3],
}

impl Default for Ifs {
    fn default() -> Self {
        Self::standard()
    }
}

impl Ifs {
    pub fn standard() -> Self {
        let b = |tag, xs, xo, ys, yo| Branch {
            tag,
            x_scale: xs,
            x_offset: xo,
            y_scale: ys,
            y_offset: yo,
        };
        Self {
            branches: [
                b(BranchTag::Left, rat(4, 9), int(0), rat(2, 3), int(0)),
                b(BranchTag::Mid, rat(1, 9), rat(4, 9), rat(-1, 3), rat(2, 3)),
                b(BranchTag::Right, rat(4, 9), rat(5, 9), rat(2, 3), rat(1, 3)),
            ],
        }
    }

    pub fn branch(&self, tag: BranchTag) -> &Branch {
        &self.branches[tag.index()]
    }

    pub fn branches(&self) -> &[Branch; 3] {
        &self.branches
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        let i = branch.tag.index();
        self.branches[i] = branch;
        self
    }

    /// First branch, in Left, Mid, Right order, whose x-image contains `t`.
    /// This is the tie-break at the shared abscissas 4/9 and 5/9.
    fn select(&self, t: &Rational) -> Option<&Branch> {
        self.branches.iter().find(|b| b.contains(t))
    }

    /// Vertices of `u_n`, capped at [`DEFAULT_MAX_POINTS`].
    pub fn iterate(&self, n: u32) -> Result<PiecewiseLinear> {
        self.iterate_capped(n, DEFAULT_MAX_POINTS)
    }

    pub fn iterate_capped(&self, n: u32, max_points: u128) -> Result<PiecewiseLinear> {
        let needed = 3u128.checked_pow(n).map(|p| p + 1).unwrap_or(u128::MAX);
        if needed > max_points {
            return Err(Error::DepthTooLarge {
                level: n,
                needed,
                cap: max_points,
            });
        }
        let mut points = vec![(int(0), int(0)), (int(1), int(1))];
        for _ in 0..n {
            let mut next: Vec<(Rational, Rational)> = Vec::with_capacity(points.len() * 3);
            for branch in &self.branches {
                let mut copy: Vec<_> = points
                    .iter()
                    .map(|(x, y)| (branch.map_x(x), branch.map_y(y)))
                    .collect();
                if branch.x_scale.is_negative() {
                    copy.reverse();
                }
                let mut iter = copy.into_iter();
                if let (Some(last), Some(first)) = (next.last(), iter.as_slice().first()) {
                    // a shared joint keeps the value of the left copy
                    if last.0 == first.0 {
                        iter.next();
                    }
                }
                next.extend(iter);
            }
            points = next;
        }
        PiecewiseLinear::new(points)
    }

    /// Places where the three copies fail to glue into the graph of a
    /// continuous function from `(0, 0)` to `(1, 1)`: mismatched values at
    /// shared abscissas, gaps, or moved endpoints. Empty for the standard
    /// system.
    pub fn joint_defects(&self) -> Vec<String> {
        let mut defects = Vec::new();
        let ends: Vec<_> = self
            .branches
            .iter()
            .map(|b| {
                let start = (b.map_x(&int(0)), b.map_y(&int(0)));
                let end = (b.map_x(&int(1)), b.map_y(&int(1)));
                if b.x_scale.is_negative() {
                    (end, start)
                } else {
                    (start, end)
                }
            })
            .collect();
        if ends[0].0 != (int(0), int(0)) {
            defects.push(format!(
                "first copy starts at ({}, {})",
                ends[0].0 .0, ends[0].0 .1
            ));
        }
        if ends[2].1 != (int(1), int(1)) {
            defects.push(format!(
                "last copy ends at ({}, {})",
                ends[2].1 .0, ends[2].1 .1
            ));
        }
        for w in ends.windows(2) {
            let (left_end, right_start) = (&w[0].1, &w[1].0);
            if left_end != right_start {
                defects.push(format!(
                    "joint mismatch: ({}, {}) vs ({}, {})",
                    left_end.0, left_end.1, right_start.0, right_start.1
                ));
            }
        }
        defects
    }

    /// Exact `u_n(t)` by branch recursion.
    pub fn eval_un(&self, n: u32, t: &Rational) -> Result<Rational> {
        check_unit(t)?;
        let mut maps = Vec::with_capacity(n as usize);
        let mut x = t.clone();
        for _ in 0..n {
            let b = self
                .select(&x)
                .ok_or_else(|| Error::InvalidIfs(x.clone()))?;
            x = b.unmap_x(&x);
            maps.push(b);
        }
        let mut y = x;
        for b in maps.iter().rev() {
            y = b.map_y(&y);
        }
        Ok(y)
    }

    /// Encloses `u(t)` by descending at most `depth` levels. After `k`
    /// steps `u(t) = A(u(t_k))` with `A` the accumulated y-map; the unknown
    /// `u(t_k)` is enclosed in `[0, 1]`, so the width is `|∏ y_scale|`.
    /// The descent stops early, with an exact value, when `t_k` hits 0 or 1.
    pub fn eval_u(&self, t: &Rational, depth: u32) -> Result<IntervalR> {
        check_unit(t)?;
        let mut acc = AffineMap1D::identity();
        let mut x = t.clone();
        for _ in 0..depth {
            if x.is_zero() || x.is_one() {
                break;
            }
            let b = self
                .select(&x)
                .ok_or_else(|| Error::InvalidIfs(x.clone()))?;
            x = b.unmap_x(&x);
            acc = acc.compose(&AffineMap1D {
                a: b.y_scale.clone(),
                b: b.y_offset.clone(),
            });
        }
        if x.is_zero() || x.is_one() {
            return Ok(IntervalR::point(acc.apply(&x)));
        }
        Ok(IntervalR::spanning(acc.apply(&int(0)), acc.apply(&int(1))))
    }

    /// `u` extended evenly and 2-periodically to the whole line.
    pub fn eval_u_extended(&self, t: &Rational, depth: u32) -> Result<IntervalR> {
        self.eval_u(&reduce_domain(t), depth)
    }

    /// Certified enclosure of `Δ(s, t)` for the extended function. Exact
    /// when both values are exact and `|s - t|` is a rational square.
    pub fn diff_quotient(&self, s: &Rational, t: &Rational, depth: u32) -> Result<IntervalR> {
        if s == t {
            return Err(Error::CoincidentPoints(s.clone()));
        }
        let us = self.eval_u_extended(s, depth)?;
        let ut = self.eval_u_extended(t, depth)?;
        let gap = (s - t).abs();
        let width = dyadic_unit(depth + 64).min(&gap / int(2));
        let num = &us - &ut;
        let q = match num.as_point() {
            Some(n) => quotient_enclose(n, &gap, &width)?,
            None => num
                .div(&sqrt_enclose(&gap, &width)?)?
                .round_outward(2 * depth + 64),
        };
        Ok(if s < t { -q } else { q })
    }

    /// Witnesses for the unit-scale oscillation bound at `t0`:
    /// `(5/9, 1)` when `t0 <= 1/2`, otherwise `(0, 4/9)`.
    pub fn claim2_witnesses(&self, t0: &Rational, depth: u32) -> Result<QuotientWitness> {
        check_unit(t0)?;
        let (s1, s2) = if t0 <= &rat(1, 2) {
            (rat(5, 9), int(1))
        } else {
            (int(0), rat(4, 9))
        };
        self.witness_at(t0, s1, s2, depth)
    }

    fn witness_at(
        &self,
        t0: &Rational,
        s1: Rational,
        s2: Rational,
        depth: u32,
    ) -> Result<QuotientWitness> {
        let delta1 = self.diff_quotient(&s1, t0, depth)?;
        let delta2 = self.diff_quotient(&s2, t0, depth)?;
        let gap = (&delta1 - &delta2).abs();
        let side = if &s1 > t0 { 1 } else { -1 };
        Ok(QuotientWitness {
            t0: t0.clone(),
            s1,
            s2,
            side,
            delta1,
            delta2,
            gap,
        })
    }

    /// Descends through cells containing `t` and stops at the first one of
    /// length `<= delta`. Ties at cell boundaries go to the leftmost cell.
    pub fn locate_cell(&self, t: &Rational, delta: &Rational) -> Result<Cell> {
        check_unit(t)?;
        if !delta.is_positive() || delta > &int(1) {
            return Err(Error::InvalidParameter(format!(
                "scale {delta} must lie in (0, 1]"
            )));
        }
        let mut map = AffineMap1D::identity();
        let mut address = Vec::new();
        let mut orientation = 1i8;
        let mut x = t.clone();
        while &map.a.abs() > delta {
            if address.len() > 100_000 {
                return Err(Error::InvalidIfs(t.clone()));
            }
            let b = self
                .select(&x)
                .ok_or_else(|| Error::InvalidIfs(x.clone()))?;
            x = b.unmap_x(&x);
            map = map.compose(&b.x_map());
            orientation *= b.orientation();
            address.push(b.tag);
        }
        Ok(Cell {
            address: Address(address),
            map,
            orientation,
        })
    }

    /// Witnesses at scale `delta`: the unit-scale witnesses of the cell
    /// preimage of `t`, pushed forward by the cell's abscissa map. The gap
    /// is recomputed at `t` itself, descending `depth` levels below the
    /// cell.
    pub fn claim3_witnesses(
        &self,
        t: &Rational,
        delta: &Rational,
        depth: u32,
    ) -> Result<(Cell, QuotientWitness)> {
        let cell = self.locate_cell(t, delta)?;
        let t0 = cell.map.invert(t);
        let base = self.claim2_witnesses(&t0, depth)?;
        let s1 = cell.map.apply(&base.s1);
        let s2 = cell.map.apply(&base.s2);
        let w = self.witness_at(t, s1, s2, depth + cell.address.len() as u32)?;
        Ok((cell, w))
    }
}

fn check_unit(t: &Rational) -> Result<()> {
    if t.is_negative() || t > &int(1) {
        Err(Error::OutOfDomain(t.clone()))
    } else {
        Ok(())
    }
}

/// Maps any abscissa to `[0, 1]` using `u(t) = u(-t)` and period 2.
pub fn reduce_domain(t: &Rational) -> Rational {
    let two = int(2);
    let m = t - &two * (t / &two).floor();
    if m > int(1) {
        two - m
    } else {
        m
    }
}

/// `d1 = 1/18`, the unit-scale separation of the witnesses.
pub fn d1() -> Rational {
    rat(1, 18)
}

/// `c1 = d1 / 9 = 1/162`, the separation at scale δ (relative to δ).
pub fn c1() -> Rational {
    d1() / int(9)
}

/// Enclosure of `d2 = min{ (1/3)((1 - 4/81)^{-1/2} - 1), 7/9 - 3/5, 1/√5 }`.
pub fn d2(width: &Rational) -> IntervalR {
    let inv_root = quotient_enclose(&int(1), &rat(77, 81), width).expect("positive denominator");
    let first = inv_root.shift(&int(-1)).scale(&rat(1, 3));
    let second = IntervalR::point(rat(7, 9) - rat(3, 5));
    let third = quotient_enclose(&int(1), &int(5), width).expect("positive denominator");
    first.min(&second).min(&third)
}

fn standard() -> &'static Ifs {
    static IFS: OnceLock<Ifs> = OnceLock::new();
    IFS.get_or_init(Ifs::standard)
}

pub fn iterate(n: u32) -> Result<PiecewiseLinear> {
    standard().iterate(n)
}

pub fn eval_un(n: u32, t: &Rational) -> Result<Rational> {
    standard().eval_un(n, t)
}

pub fn eval_u(t: &Rational, depth: u32) -> Result<IntervalR> {
    standard().eval_u(t, depth)
}

pub fn diff_quotient(s: &Rational, t: &Rational, depth: u32) -> Result<IntervalR> {
    standard().diff_quotient(s, t, depth)
}

pub fn claim2_witnesses(t0: &Rational) -> Result<QuotientWitness> {
    standard().claim2_witnesses(t0, DEFAULT_DEPTH)
}

pub fn locate_cell(t: &Rational, delta: &Rational) -> Result<Cell> {
    standard().locate_cell(t, delta)
}

pub fn claim3_witnesses(t: &Rational, delta: &Rational) -> Result<QuotientWitness> {
    standard()
        .claim3_witnesses(t, delta, DEFAULT_DEPTH)
        .map(|(_, w)| w)
}

/// The standard system, shared.
pub fn standard_ifs() -> &'static Ifs {
    standard()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{cmp_abs_sq, pow};
    use proptest::prelude::*;
    use std::cmp::Ordering;

    #[test]
    fn first_iterates() {
        let u0 = iterate(0).unwrap();
        assert_eq!(u0.points(), &[(int(0), int(0)), (int(1), int(1))]);
        let u1 = iterate(1).unwrap();
        assert_eq!(
            u1.points(),
            &[
                (int(0), int(0)),
                (rat(4, 9), rat(2, 3)),
                (rat(5, 9), rat(1, 3)),
                (int(1), int(1))
            ]
        );
        let u2 = iterate(2).unwrap();
        assert_eq!(u2.len(), 10);
        assert_eq!(u2.eval(&rat(16, 81)).unwrap(), rat(4, 9));
        for n in 0..7 {
            assert_eq!(iterate(n).unwrap().len(), 3usize.pow(n) + 1);
        }
    }

    #[test]
    fn iterate_cap() {
        assert!(matches!(
            Ifs::standard().iterate_capped(5, 100),
            Err(Error::DepthTooLarge {
                level: 5,
                needed: 244,
                cap: 100
            })
        ));
        assert!(iterate(99).is_err());
    }

    #[test]
    fn eval_un_examples() {
        assert_eq!(eval_un(1, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(eval_un(1, &rat(2, 9)).unwrap(), rat(1, 3));
        for n in 1..6 {
            assert_eq!(eval_un(n, &rat(4, 9)).unwrap(), rat(2, 3));
            assert_eq!(eval_un(n, &rat(5, 9)).unwrap(), rat(1, 3));
        }
        assert_eq!(eval_un(3, &rat(3, 2)), Err(Error::OutOfDomain(rat(3, 2))));
    }

    #[test]
    fn boundary_branches_agree() {
        let ifs = Ifs::standard();
        let (l, m, r) = (
            ifs.branch(BranchTag::Left),
            ifs.branch(BranchTag::Mid),
            ifs.branch(BranchTag::Right),
        );
        assert_eq!(l.map_y(&int(1)), m.map_y(&int(0)));
        assert_eq!(m.map_y(&int(1)), r.map_y(&int(0)));
        assert!(ifs.joint_defects().is_empty());
        for b in ifs.branches() {
            assert_eq!(&b.y_scale * &b.y_scale, b.x_scale);
        }
    }

    #[test]
    fn eval_u_examples() {
        assert_eq!(eval_u(&int(0), 5).unwrap(), IntervalR::zero());
        assert_eq!(eval_u(&int(1), 0).unwrap(), IntervalR::point(int(1)));
        for d in [0, 1, 5, 20] {
            let e = eval_u(&rat(1, 2), d).unwrap();
            assert!(e.contains(&rat(1, 2)));
            assert!(e.width() <= pow(&rat(2, 3), d));
        }
        let e = eval_u(&rat(2, 9), 2).unwrap();
        assert!(e.contains(&rat(1, 3)));
        // generic point: width bound holds and the enclosure is honest
        let t = rat(1, 5);
        let e = eval_u(&t, 30).unwrap();
        assert!(e.width() <= pow(&rat(2, 3), 30));
        assert!(!e.is_point());
    }

    #[test]
    fn reduce_domain_examples() {
        assert_eq!(reduce_domain(&rat(1, 2)), rat(1, 2));
        assert_eq!(reduce_domain(&rat(-1, 3)), rat(1, 3));
        assert_eq!(reduce_domain(&rat(7, 3)), rat(1, 3));
        assert_eq!(reduce_domain(&int(-2)), int(0));
        assert_eq!(reduce_domain(&int(3)), int(1));
    }

    #[test]
    fn diff_quotient_examples() {
        assert_eq!(
            diff_quotient(&int(1), &int(0), 10).unwrap(),
            IntervalR::point(int(1))
        );
        assert_eq!(
            diff_quotient(&rat(5, 9), &rat(4, 9), 10).unwrap(),
            IntervalR::point(int(-1))
        );
        assert_eq!(
            diff_quotient(&rat(4, 9), &int(0), 10).unwrap(),
            IntervalR::point(int(1))
        );
        // antisymmetry of the sign convention: Δ(s,t) = Δ(t,s)
        assert_eq!(
            diff_quotient(&int(0), &rat(4, 9), 10).unwrap(),
            IntervalR::point(int(1))
        );
        assert_eq!(
            diff_quotient(&rat(1, 3), &rat(1, 3), 10),
            Err(Error::CoincidentPoints(rat(1, 3)))
        );
    }

    #[test]
    fn d2_value() {
        let d = d2(&dyadic_unit(60));
        // (1/3)(9/sqrt(77) - 1) = 0.0085483960455...
        assert!(
            d.contains(&rat(854_839_604, 100_000_000_000))
                || d.lo() > &rat(854_839_604, 100_000_000_000)
        );
        assert!(d.lo() >= &rat(854, 100_000));
        assert!(d.hi() < &rat(85_484, 10_000_000));
    }

    #[test]
    fn claim2_cases() {
        let w = claim2_witnesses(&rat(1, 5)).unwrap();
        assert_eq!((w.s1.clone(), w.s2.clone()), (rat(5, 9), int(1)));
        let w = claim2_witnesses(&rat(1, 2)).unwrap();
        assert_eq!((w.s1.clone(), w.s2.clone(), w.side), (rat(5, 9), int(1), 1));
        let w = claim2_witnesses(&rat(3, 4)).unwrap();
        assert_eq!(
            (w.s1.clone(), w.s2.clone(), w.side),
            (int(0), rat(4, 9), -1)
        );
        assert!(claim2_witnesses(&rat(11, 10)).is_err());
    }

    #[test]
    fn locate_cell_examples() {
        let c = locate_cell(&rat(1, 5), &int(1)).unwrap();
        assert!(c.address.is_empty());
        assert_eq!(c.map, AffineMap1D::identity());
        assert_eq!(c.orientation, 1);

        let c = locate_cell(&rat(1, 2), &rat(1, 9)).unwrap();
        assert_eq!(c.address.0, vec![BranchTag::Mid]);
        assert_eq!(
            c.map,
            AffineMap1D {
                a: rat(1, 9),
                b: rat(4, 9)
            }
        );
        assert_eq!(c.orientation, -1);

        // 1/9 > 1/10, so one more Mid step is needed
        let c = locate_cell(&rat(1, 2), &rat(1, 10)).unwrap();
        assert_eq!(c.address.0, vec![BranchTag::Mid, BranchTag::Mid]);
        assert_eq!(
            c.map,
            AffineMap1D {
                a: rat(1, 81),
                b: rat(40, 81)
            }
        );
        assert_eq!(c.orientation, 1);

        let c = locate_cell(&rat(1, 10), &rat(3, 10)).unwrap();
        assert_eq!(c.address.0, vec![BranchTag::Left, BranchTag::Left]);
        assert_eq!(
            c.map,
            AffineMap1D {
                a: rat(16, 81),
                b: int(0)
            }
        );

        // ties go to the left cell
        let c = locate_cell(&rat(4, 9), &rat(1, 2)).unwrap();
        assert_eq!(c.address.0, vec![BranchTag::Left]);
    }

    #[test]
    fn claim3_examples() {
        let w = claim3_witnesses(&rat(1, 5), &int(1)).unwrap();
        assert_eq!((w.s1, w.s2), (rat(5, 9), int(1)));
        let w = claim3_witnesses(&rat(1, 2), &rat(1, 9)).unwrap();
        assert_eq!((w.s1, w.s2), (rat(41, 81), rat(5, 9)));
        let w = claim3_witnesses(&rat(1, 2), &rat(1, 10)).unwrap();
        assert_eq!((w.s1, w.s2), (rat(365, 729), rat(41, 81)));

        // explicit descent for t = 0, δ = 1/81: (4/9)^5 > 1/81 >= (4/9)^6
        assert!(pow(&rat(4, 9), 5) > rat(1, 81));
        assert!(pow(&rat(4, 9), 6) <= rat(1, 81));
        let c = locate_cell(&int(0), &rat(1, 81)).unwrap();
        assert_eq!(c.address.0, vec![BranchTag::Left; 6]);
        let w = claim3_witnesses(&int(0), &rat(1, 81)).unwrap();
        assert_eq!(w.s1, pow(&rat(4, 9), 6) * rat(5, 9));
        assert_eq!(w.s2, pow(&rat(4, 9), 6));
    }

    #[test]
    fn mid_branch_flips_quotient_sign() {
        let ifs = Ifs::standard();
        let (cell, w) = ifs.claim3_witnesses(&rat(1, 2), &rat(1, 9), 40).unwrap();
        let base = ifs.claim2_witnesses(&rat(1, 2), 40).unwrap();
        assert_eq!(cell.orientation, -1);
        assert!((&w.delta1 + &base.delta1).contains_zero());
        assert!((&w.delta2 + &base.delta2).contains_zero());
    }

    #[test]
    fn contraction_first_step() {
        let d = iterate(1)
            .unwrap()
            .sup_distance(&iterate(0).unwrap())
            .unwrap();
        assert_eq!(d, rat(2, 9));
    }

    fn breakpoint_of(level: u32) -> impl Strategy<Value = Rational> {
        let pts: Vec<Rational> = iterate(level)
            .unwrap()
            .points()
            .iter()
            .map(|p| p.0.clone())
            .collect();
        proptest::sample::select(pts)
    }

    proptest! {
        #[test]
        fn symmetry_on_breakpoints(t in breakpoint_of(5)) {
            let u5 = iterate(5).unwrap();
            prop_assert_eq!(u5.eval(&t).unwrap(), int(1) - u5.eval(&(int(1) - &t)).unwrap());
        }

        #[test]
        fn enclosures_nest_and_contain_iterates(n in 0i64..=1000, d in 0u32..14) {
            let t = rat(n, 1000);
            let coarse = eval_u(&t, d).unwrap();
            let fine = eval_u(&t, d + 1).unwrap();
            prop_assert!(fine.is_subset_of(&coarse));
            let un = eval_un(d, &t).unwrap();
            prop_assert!(coarse.contains(&un));
            prop_assert!(coarse.width() <= pow(&rat(2, 3), d));
        }

        #[test]
        fn branches_preserve_quotients(s in breakpoint_of(4), t in breakpoint_of(4), which in 0usize..3) {
            prop_assume!(s != t);
            let ifs = Ifs::standard();
            let b = &ifs.branches()[which];
            let direct = ifs.diff_quotient(&s, &t, 20).unwrap();
            let mapped = ifs.diff_quotient(&b.map_x(&s), &b.map_x(&t), 20).unwrap();
            let expected = if b.orientation() < 0 { -direct } else { direct };
            prop_assert_eq!(mapped, expected);
        }

        #[test]
        fn holder_on_iterate_breakpoints(s in breakpoint_of(4), t in breakpoint_of(4)) {
            let u4 = iterate(4).unwrap();
            let du = u4.eval(&s).unwrap() - u4.eval(&t).unwrap();
            prop_assert_ne!(cmp_abs_sq(&du, &(s - t)), Ordering::Greater);
        }
    }
}
