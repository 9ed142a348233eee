//! Stokes lines of the quadratic differential `V(λ) dλ²` and the topology of
//! the resulting graph.
//!
//! A Stokes line leaves a turning point `e` along a curve on which
//! `Re ∫ₑ^λ √V dλ = 0`. Far from the turning points such a curve approaches
//! one of the five directions `arg λ = (2j + 1)π/5`; the index `j ∈ {−2,…,2}`
//! is what a line's asymptotic terminus records.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::potential::{Potential, TurningPoints};
use crate::{Complex, Error, Result, I};

/// Label returned by [`classify_graph`] for the pole-region topology.
pub const TYPE_320: &str = "320";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    /// Step length as a fraction of the distance to the nearest turning point.
    pub step_fraction: f64,
    /// Start offset from the origin turning point, as a fraction of the
    /// smallest turning-point separation.
    pub start_fraction: f64,
    /// Lines stop once `|λ| ≥ escape_factor · (1 + max |e|)`.
    pub escape_factor: f64,
    /// A line merges into a turning point within `merge_factor · escape_radius`.
    pub merge_factor: f64,
    pub max_steps: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            step_fraction: 0.02,
            start_fraction: 1e-3,
            escape_factor: 10.0,
            merge_factor: 1e-4,
            max_steps: 200_000,
        }
    }
}

/// Where a traced line ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminus {
    /// Escaped towards `arg λ = (2j + 1)π/5`.
    Asymptotic(i8),
    /// Reached the turning point with this canonical index.
    TurningPoint(usize),
    /// Ran out of steps.
    StepLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesLine {
    pub origin: usize,
    pub polyline: Vec<Complex>,
    pub terminus: Terminus,
}

impl StokesLine {
    /// `Re ∫ √V dλ` along the polyline (Simpson per segment, with the branch
    /// continued from the origin) together with the accumulated `∫ |√V| |dλ|`.
    pub fn action_drift(&self, pot: &Potential) -> (f64, f64) {
        let mut w = match self.polyline.get(1) {
            Some(&p) => pot.eval(p).sqrt(),
            None => return (0.0, 0.0),
        };
        let mut re = 0.0;
        let mut total = 0.0;
        let mut prev = pot.eval(self.polyline[0]).sqrt();
        prev = follow(prev, w);
        for pair in self.polyline.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let wm = follow(prev, pot.eval((p + q) / 2.0).sqrt());
            w = follow(wm, pot.eval(q).sqrt());
            let seg = (prev + 4.0 * wm + w) / 6.0 * (q - p);
            re += seg.re;
            total += (prev.norm() + 4.0 * wm.norm() + w.norm()) / 6.0 * (q - p).norm();
            prev = w;
        }
        (re.abs(), total)
    }
}

fn follow(prev: Complex, candidate: Complex) -> Complex {
    if (candidate - prev).norm() <= (candidate + prev).norm() {
        candidate
    } else {
        -candidate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesGraph {
    pub turning_points: TurningPoints,
    pub lines: Vec<StokesLine>,
    pub topology_label: String,
    pub escape_radius: f64,
}

impl StokesGraph {
    /// Termini of the three lines leaving turning point `i`.
    pub fn termini(&self, i: usize) -> Vec<Terminus> {
        self.lines.iter().filter(|l| l.origin == i).map(|l| l.terminus).collect()
    }

    /// The vertex joined to both others, when the graph has type "320".
    pub fn inner_vertex(&self) -> Option<usize> {
        match_320(self)
    }

    pub fn is_320(&self) -> bool {
        self.topology_label == TYPE_320
    }
}

/// Angle of the asymptotic direction with index `j`.
pub fn asymptotic_direction(j: i8) -> f64 {
    (2 * j as i32 + 1) as f64 * PI / 5.0
}

fn asymptotic_index(lambda: Complex) -> i8 {
    let t = lambda.arg();
    let mut best = (0i8, f64::INFINITY);
    for j in -2i8..=2 {
        let mut d = (t - asymptotic_direction(j)).abs();
        if d > PI {
            d = 2.0 * PI - d;
        }
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// Traces the nine Stokes lines and classifies the graph.
pub fn trace_stokes_lines(pot: &Potential) -> Result<StokesGraph> {
    trace_stokes_lines_with(pot, &TraceConfig::default())
}

pub fn trace_stokes_lines_with(pot: &Potential, cfg: &TraceConfig) -> Result<StokesGraph> {
    let tp = pot.turning_points()?;
    let escape = cfg.escape_factor * (1.0 + tp.scale());
    let mut lines = Vec::with_capacity(9);
    for origin in 0..3 {
        let e = tp.roots()[origin];
        let dv = pot.derivative(e);
        for n in 0..3 {
            let phi = (PI + 2.0 * PI * n as f64 - dv.arg()) / 3.0;
            lines.push(trace_line(pot, &tp, origin, phi, escape, cfg)?);
        }
    }
    let mut graph = StokesGraph { turning_points: tp, lines, topology_label: String::new(), escape_radius: escape };
    graph.topology_label = classify_graph(&graph)?;
    Ok(graph)
}

fn trace_line(
    pot: &Potential,
    tp: &TurningPoints,
    origin: usize,
    phi: f64,
    escape: f64,
    cfg: &TraceConfig,
) -> Result<StokesLine> {
    let e = tp.roots()[origin];
    let delta = cfg.start_fraction * tp.min_separation();
    let tol_merge = cfg.merge_factor * escape;
    let start_dir = Complex::from_polar(1.0, phi);
    let mut lambda = e + start_dir * delta;
    let mut w = pot.eval(lambda).sqrt();
    let d0 = I * w.conj() / w.norm();
    let sigma = if (d0 * start_dir.conj()).re >= 0.0 { 1.0 } else { -1.0 };
    // Local action (2/3)·√V·(λ − e), accurate to O(δ^{5/2}).
    let mut action = 2.0 / 3.0 * w * (lambda - e);
    let mut poly = Vec::with_capacity(512);
    poly.push(e);
    poly.push(lambda);

    let field = |p: Complex, w_ref: Complex| -> (Complex, Complex) {
        let wp = follow(w_ref, pot.eval(p).sqrt());
        (sigma * I * wp.conj() / wp.norm(), wp)
    };

    for _ in 0..cfg.max_steps {
        if lambda.norm() >= escape {
            return Ok(StokesLine { origin, polyline: poly, terminus: Terminus::Asymptotic(asymptotic_index(lambda)) });
        }
        let mut near = f64::INFINITY;
        for (j, r) in tp.roots().iter().enumerate() {
            let d = (lambda - r).norm();
            if j != origin && d < tol_merge {
                poly.push(*r);
                return Ok(StokesLine { origin, polyline: poly, terminus: Terminus::TurningPoint(j) });
            }
            near = near.min(d);
        }
        let h = cfg.step_fraction * near.max(delta);
        if !(h > 1e-14 * (1.0 + lambda.norm())) {
            return Err(Error::TraceStalled { step: h });
        }
        let (k1, w1) = field(lambda, w);
        let (k2, w2) = field(lambda + k1 * (h / 2.0), w1);
        let (k3, w3) = field(lambda + k2 * (h / 2.0), w2);
        let (k4, _) = field(lambda + k3 * h, w3);
        let next = lambda + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        let wm = follow(w, pot.eval((lambda + next) / 2.0).sqrt());
        let mut wn = follow(wm, pot.eval(next).sqrt());
        action += (w + 4.0 * wm + wn) / 6.0 * (next - lambda);
        // Pull the point back onto Re A = 0.
        let corr = -action.re * wn.conj() / wn.norm_sqr();
        let next = next + corr;
        action += wn * corr;
        wn = follow(wn, pot.eval(next).sqrt());
        lambda = next;
        w = wn;
        poly.push(lambda);
    }
    Ok(StokesLine { origin, polyline: poly, terminus: Terminus::StepLimit })
}

fn match_320(g: &StokesGraph) -> Option<usize> {
    let mut inner = None;
    let mut asym = Vec::with_capacity(5);
    let mut outer_pairs = Vec::with_capacity(2);
    for i in 0..3 {
        let t = g.termini(i);
        if t.len() != 3 {
            return None;
        }
        let tps: Vec<usize> = t
            .iter()
            .filter_map(|x| match x {
                Terminus::TurningPoint(j) => Some(*j),
                _ => None,
            })
            .collect();
        let a: Vec<i8> = t
            .iter()
            .filter_map(|x| match x {
                Terminus::Asymptotic(j) => Some(*j),
                _ => None,
            })
            .collect();
        if tps.len() + a.len() != 3 {
            return None;
        }
        match tps.len() {
            2 => {
                if inner.is_some() || tps[0] == tps[1] {
                    return None;
                }
                inner = Some(i);
            }
            1 => outer_pairs.push((i, tps[0], a[0], a[1])),
            _ => return None,
        }
        asym.extend_from_slice(&a);
    }
    let inner = inner?;
    if outer_pairs.len() != 2 {
        return None;
    }
    for &(_, target, x, y) in &outer_pairs {
        let gap = (x - y).rem_euclid(5);
        if target != inner || !(gap == 1 || gap == 4) {
            return None;
        }
    }
    asym.sort_unstable();
    asym.dedup();
    if asym.len() != 5 {
        return None;
    }
    Some(inner)
}

/// Canonical topology label: `"320"` for the pole-region structure, else
/// the lexicographically smallest rendering, over the five rotations of the
/// asymptotic indices, of the sorted per-vertex terminus signatures.
pub fn classify_graph(g: &StokesGraph) -> Result<String> {
    if g.lines.iter().any(|l| l.terminus == Terminus::StepLimit) {
        return Err(Error::UnresolvedTopology);
    }
    if match_320(g).is_some() {
        return Ok(String::from(TYPE_320));
    }
    let mut best: Option<String> = None;
    for r in 0..5i8 {
        let mut sigs: Vec<String> = (0..3)
            .map(|i| {
                let mut parts: Vec<String> = g
                    .termini(i)
                    .iter()
                    .map(|t| match t {
                        Terminus::Asymptotic(j) => format!("{}", (j - r).rem_euclid(5)),
                        _ => String::from("T"),
                    })
                    .collect();
                parts.sort();
                parts.join(",")
            })
            .collect();
        sigs.sort();
        let label = sigs.join("|");
        if best.as_ref().is_none_or(|b| label < *b) {
            best = Some(label);
        }
    }
    Ok(best.unwrap_or_default())
}

/// Number of proper intersections between polylines of distinct lines that
/// are not the two traversals of the same saddle connection.
pub fn crossing_count(g: &StokesGraph) -> usize {
    let mut count = 0;
    for (i, li) in g.lines.iter().enumerate() {
        for lj in g.lines.iter().skip(i + 1) {
            let twin = li.terminus == Terminus::TurningPoint(lj.origin) && lj.terminus == Terminus::TurningPoint(li.origin);
            if twin {
                continue;
            }
            count += polyline_crossings(&li.polyline, &lj.polyline);
        }
    }
    count
}

fn polyline_crossings(p: &[Complex], q: &[Complex]) -> usize {
    let bbox = |a: Complex, b: Complex| (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im));
    let mut n = 0;
    for s in p.windows(2) {
        let bs = bbox(s[0], s[1]);
        for t in q.windows(2) {
            let bt = bbox(t[0], t[1]);
            if bs.1 < bt.0 || bt.1 < bs.0 || bs.3 < bt.2 || bt.3 < bs.2 {
                continue;
            }
            if segments_cross(s[0], s[1], t[0], t[1]) {
                n += 1;
            }
        }
    }
    n
}

fn segments_cross(a: Complex, b: Complex, c: Complex, d: Complex) -> bool {
    let cross = |u: Complex, v: Complex| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_indices() {
        assert_eq!(asymptotic_index(Complex::from_polar(1.0, PI / 5.0)), 0);
        assert_eq!(asymptotic_index(Complex::new(-1.0, 1e-9)), 2);
        assert_eq!(asymptotic_index(Complex::new(-1.0, -1e-9)), 2);
        assert_eq!(asymptotic_index(Complex::from_polar(1.0, -3.0 * PI / 5.0)), -2);
    }

    #[test]
    fn anchor_is_320() {
        let g = trace_stokes_lines(&Potential::real(-2.347_591_99, -0.063_997_74)).unwrap();
        assert_eq!(g.topology_label, TYPE_320);
        assert_eq!(g.inner_vertex(), Some(TurningPoints::INNER));
        for i in 0..3 {
            assert_eq!(g.termini(i).len(), 3);
        }
    }

    #[test]
    fn degenerate_point_fails() {
        assert_eq!(trace_stokes_lines(&Potential::real(0.0, 0.0)).unwrap_err().name(), "DegenerateTurningPoints");
    }
}
