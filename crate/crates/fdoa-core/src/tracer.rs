//! Numerical tracing of the real points of Z in the chart `u = 1`, split into
//! the four sign branches of the radii.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{build_h, fdoa_value, Scenario};
use crate::scalar::Scalar;

pub const SENSORS: [(f64, f64); 2] = [(1.0, 0.0), (-1.0, 0.0)];

#[derive(Clone, Debug, PartialEq)]
pub struct TraceConfig {
    /// `(y1 min, y1 max, y2 min, y2 max)`.
    pub window: (f64, f64, f64, f64),
    /// Samples per axis.
    pub grid: (usize, usize),
    pub refine_depth: u32,
    pub zero_tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            window: (-3.0, 3.0, -3.0, 3.0),
            grid: (512, 512),
            refine_depth: 3,
            zero_tol: 1e-10,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        let (x0, x1, y0, y1) = self.window;
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "degenerate window {:?}",
                self.window
            )));
        }
        if self.grid.0 < 16 || self.grid.1 < 16 {
            return Err(Error::InvalidConfig(format!(
                "grid {:?} below 16",
                self.grid
            )));
        }
        if self.zero_tol.is_nan() || self.zero_tol <= 0.0 {
            return Err(Error::InvalidConfig("zero_tol must be positive".into()));
        }
        if self.refine_depth > 8 {
            return Err(Error::InvalidConfig("refine_depth above 8".into()));
        }
        Ok(())
    }

    fn cell(&self) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.window;
        (
            (x1 - x0) / (self.grid.0 - 1) as f64,
            (y1 - y0) / (self.grid.1 - 1) as f64,
        )
    }
}

/// `A_{s1 s2}`: the zero set of `g` with radii `s1 R1, s2 R2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    App,
    Amm,
    Amp,
    Apm,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::App, Branch::Amm, Branch::Amp, Branch::Apm];

    pub fn signs(self) -> (f64, f64) {
        match self {
            Branch::App => (1.0, 1.0),
            Branch::Amm => (-1.0, -1.0),
            Branch::Amp => (-1.0, 1.0),
            Branch::Apm => (1.0, -1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::App => "App",
            Branch::Amm => "Amm",
            Branch::Amp => "Amp",
            Branch::Apm => "Apm",
        }
    }

    pub fn color(self) -> &'static str {
        match self {
            Branch::App => "#FF0000",
            Branch::Amm => "#006400",
            Branch::Amp => "#000080",
            Branch::Apm => "#008080",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Branch::ALL.into_iter().find(|b| b.label() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

pub type Polyline = Vec<(f64, f64)>;

#[derive(Clone, Debug, PartialEq)]
pub struct TracedBranch {
    pub label: Branch,
    pub polylines: Vec<Polyline>,
    /// `d / v` for equal-velocity scenarios.
    pub alpha: Option<f64>,
}

impl TracedBranch {
    pub fn vertices(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.polylines.iter().flatten()
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    /// Vertices farther than `radius` from both sensors.
    pub fn off_sensor(&self, radius: f64) -> impl Iterator<Item = &(f64, f64)> {
        self.vertices()
            .filter(move |p| SENSORS.iter().all(|s| dist(**p, *s) > radius))
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let v: Vec<&(f64, f64)> = self.vertices().collect();
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(dist(*v[i], *v[j]));
            }
        }
        best
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Everything produced by one trace.
#[derive(Clone, Debug)]
pub struct TraceResult {
    pub branches: Vec<TracedBranch>,
    /// Largest `|h| / (1 + |grad h|)` over kept vertices.
    pub max_residual: f64,
    /// Crossings dropped because polishing failed or the residual bound did not hold.
    pub rejected: usize,
    /// Per branch: whether some vertex lies within one cell of the window edge.
    pub touches_boundary: Vec<(Branch, bool)>,
}

impl TraceResult {
    pub fn branch(&self, b: Branch) -> &TracedBranch {
        &self.branches[b.index()]
    }

    pub fn total_vertices(&self) -> usize {
        self.branches.iter().map(TracedBranch::vertex_count).sum()
    }
}

/// Floating-point model of `g1..g4` and `h` for a real scenario.
#[derive(Clone, Debug)]
pub struct RealModel {
    v: [f64; 4],
    d: f64,
    h_terms: Vec<([i32; 3], f64)>,
}

impl RealModel {
    pub fn new(s: &Scenario) -> Result<Self> {
        if !s.is_real() {
            return Err(Error::NonRealScenario);
        }
        let [v11, v12, v21, v22, d] = s.to_f64();
        let h_terms = build_h(s)
            .terms()
            .map(|(m, c)| ([m[0] as i32, m[1] as i32, m[2] as i32], c.to_c64().re))
            .collect();
        Ok(Self {
            v: [v11, v12, v21, v22],
            d,
            h_terms,
        })
    }

    pub fn radii(&self, y: (f64, f64)) -> (f64, f64) {
        ((1.0 - y.0).hypot(y.1), (1.0 + y.0).hypot(y.1))
    }

    pub fn l1(&self, y: (f64, f64)) -> f64 {
        self.v[0] * (1.0 - y.0) - self.v[1] * y.1
    }

    pub fn l2(&self, y: (f64, f64)) -> f64 {
        -self.v[2] * (1.0 + y.0) - self.v[3] * y.1
    }

    /// `g_j` with the signed radii of branch `b`.
    pub fn g(&self, b: Branch, y: (f64, f64)) -> f64 {
        let (s1, s2) = b.signs();
        let (r1, r2) = self.radii(y);
        let (a, c) = (s1 * r1, s2 * r2);
        self.l2(y) * a - self.l1(y) * c - self.d * a * c
    }

    /// `g_j / (R1 R2)`, bounded away from the sensors.
    pub fn g_hat(&self, b: Branch, y: (f64, f64)) -> f64 {
        let (s1, s2) = b.signs();
        let (r1, r2) = self.radii(y);
        s1 * self.l2(y) / r2 - s2 * self.l1(y) / r1 - self.d * s1 * s2
    }

    /// `|L2| R1 + |L1| R2 + |d| R1 R2`, the natural size of `g_j` at `y`.
    pub fn g_scale(&self, y: (f64, f64)) -> f64 {
        let (r1, r2) = self.radii(y);
        self.l2(y).abs() * r1 + self.l1(y).abs() * r2 + self.d.abs() * r1 * r2
    }

    /// `h(1, y1, y2)` and its gradient in `(y1, y2)`.
    pub fn h_with_gradient(&self, y: (f64, f64)) -> (f64, [f64; 2]) {
        let mut val = 0.0;
        let mut grad = [0.0; 2];
        for &([_, a, b], c) in &self.h_terms {
            let pa = y.0.powi(a);
            let pb = y.1.powi(b);
            val += c * pa * pb;
            if a > 0 {
                grad[0] += c * a as f64 * y.0.powi(a - 1) * pb;
            }
            if b > 0 {
                grad[1] += c * b as f64 * pa * y.1.powi(b - 1);
            }
        }
        (val, grad)
    }

    /// `|h| / (1 + |grad h|)`.
    pub fn h_residual(&self, y: (f64, f64)) -> f64 {
        let (v, g) = self.h_with_gradient(y);
        v.abs() / (1.0 + g[0].hypot(g[1]))
    }

    fn polish(&self, b: Branch, start: (f64, f64), max_move: f64) -> Option<(f64, f64)> {
        let mut y = start;
        for _ in 0..30 {
            let f = self.g_hat(b, y);
            if f == 0.0 {
                break;
            }
            let e = 1e-7 * (1.0 + y.0.abs().max(y.1.abs()));
            let gx = (self.g_hat(b, (y.0 + e, y.1)) - self.g_hat(b, (y.0 - e, y.1))) / (2.0 * e);
            let gy = (self.g_hat(b, (y.0, y.1 + e)) - self.g_hat(b, (y.0, y.1 - e))) / (2.0 * e);
            let n2 = gx * gx + gy * gy;
            if n2 <= 0.0 || !n2.is_finite() {
                return None;
            }
            let step = (f * gx / n2, f * gy / n2);
            y = (y.0 - step.0, y.1 - step.1);
            if step.0.hypot(step.1) < 1e-15 * (1.0 + y.0.abs().max(y.1.abs())) {
                break;
            }
        }
        let ok = y.0.is_finite() && y.1.is_finite() && dist(y, start) <= max_move;
        ok.then_some(y)
    }
}

/// Labels whose `g_j` vanishes at `y` to within `tol` times [`RealModel::g_scale`].
pub fn classify_branch(y: (f64, f64), s: &Scenario) -> Result<Vec<Branch>> {
    classify_with(&RealModel::new(s)?, y, 1e-8)
}

pub fn classify_with(m: &RealModel, y: (f64, f64), tol: f64) -> Result<Vec<Branch>> {
    let scale = m.g_scale(y);
    let out: Vec<Branch> = Branch::ALL
        .into_iter()
        .filter(|&b| m.g(b, y).abs() <= tol * scale)
        .collect();
    if out.is_empty() {
        Err(Error::NoBranch)
    } else {
        Ok(out)
    }
}

type EdgeKey = (usize, usize, bool);

struct Grid {
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    nx: usize,
    ny: usize,
    /// Row-major `[g_hat for each branch]`.
    vals: Vec<[f64; 4]>,
}

impl Grid {
    fn build(m: &RealModel, x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Self {
        let vals: Vec<[f64; 4]> = (0..ny)
            .into_par_iter()
            .flat_map_iter(|j| {
                let y = y0 + j as f64 * dy;
                (0..nx).map(move |i| {
                    let p = (x0 + i as f64 * dx, y);
                    Branch::ALL.map(|b| m.g_hat(b, p))
                })
            })
            .collect();
        Self {
            x0,
            y0,
            dx,
            dy,
            nx,
            ny,
            vals,
        }
    }

    fn at(&self, i: usize, j: usize, b: usize) -> f64 {
        self.vals[j * self.nx + i][b]
    }

    fn pos(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }

    /// Corner samples of an edge: horizontal edges run from `(i, j)` to `(i+1, j)`.
    fn edge_ends(&self, e: EdgeKey) -> ((usize, usize), (usize, usize)) {
        let (i, j, horizontal) = e;
        if horizontal {
            ((i, j), (i + 1, j))
        } else {
            ((i, j), (i, j + 1))
        }
    }

    /// Marching squares for branch `b` over the cells not skipped.
    fn segments(&self, b: usize, skip: &dyn Fn(usize, usize) -> bool) -> Vec<(EdgeKey, EdgeKey)> {
        let pos = |v: f64| v >= 0.0;
        let mut out = Vec::new();
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                if skip(i, j) {
                    continue;
                }
                let c = [
                    self.at(i, j, b),
                    self.at(i + 1, j, b),
                    self.at(i + 1, j + 1, b),
                    self.at(i, j + 1, b),
                ];
                if c.iter().any(|v| !v.is_finite()) {
                    continue;
                }
                let s = c.map(pos);
                // Edges: bottom, right, top, left.
                let edges = [
                    (i, j, true),
                    (i + 1, j, false),
                    (i, j + 1, true),
                    (i, j, false),
                ];
                let crossing: Vec<usize> = (0..4).filter(|&k| s[k] != s[(k + 1) % 4]).collect();
                match crossing.len() {
                    2 => out.push((edges[crossing[0]], edges[crossing[1]])),
                    4 => {
                        let center = c.iter().sum::<f64>() / 4.0;
                        if pos(center) == s[0] {
                            out.push((edges[0], edges[1]));
                            out.push((edges[2], edges[3]));
                        } else {
                            out.push((edges[3], edges[0]));
                            out.push((edges[1], edges[2]));
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }

    fn crossing_point(&self, m: &RealModel, branch: Branch, e: EdgeKey, depth: u32) -> (f64, f64) {
        let b = branch.index();
        let ((ia, ja), (ib, jb)) = self.edge_ends(e);
        let (mut pa, mut pb) = (self.pos(ia, ja), self.pos(ib, jb));
        let (mut fa, mut fb) = (self.at(ia, ja, b), self.at(ib, jb, b));
        for _ in 0..depth {
            let mid = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
            let fm = m.g_hat(branch, mid);
            if (fm >= 0.0) == (fa >= 0.0) {
                pa = mid;
                fa = fm;
            } else {
                pb = mid;
                fb = fm;
            }
        }
        let t = if fa == fb {
            0.5
        } else {
            (fa / (fa - fb)).clamp(0.0, 1.0)
        };
        (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
    }
}

/// Chains segments sharing an edge into polylines of edge keys.
fn chain(segments: &[(EdgeKey, EdgeKey)]) -> Vec<Vec<EdgeKey>> {
    let mut adj: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(k);
        adj.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start_seg: usize, from: EdgeKey, used: &mut Vec<bool>| -> Vec<EdgeKey> {
        let mut line = vec![from];
        let mut seg = start_seg;
        let mut at = from;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            line.push(next);
            at = next;
            match adj[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        line
    };
    // Open chains first, starting from edges with a single segment.
    let mut ends: Vec<&EdgeKey> = adj
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| k)
        .collect();
    ends.sort();
    for e in ends {
        let s = adj[e][0];
        if !used[s] {
            out.push(walk(s, *e, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, segments[s].0, &mut used));
        }
    }
    out
}

struct Collected {
    polylines: Vec<Polyline>,
    rejected: usize,
    max_residual: f64,
}

fn collect_polylines(
    m: &RealModel,
    grid: &Grid,
    branch: Branch,
    cfg: &TraceConfig,
    skip: &dyn Fn(usize, usize) -> bool,
) -> Collected {
    let segs = grid.segments(branch.index(), skip);
    let chains = chain(&segs);
    let max_move = 2.0 * grid.dx.hypot(grid.dy);
    let mut cache: HashMap<EdgeKey, Option<(f64, f64)>> = HashMap::new();
    let mut res = Collected {
        polylines: Vec::new(),
        rejected: 0,
        max_residual: 0.0,
    };
    for ch in chains {
        let mut cur: Polyline = Vec::new();
        for e in ch {
            let p = *cache.entry(e).or_insert_with(|| {
                let start = grid.crossing_point(m, branch, e, cfg.refine_depth);
                let p = m.polish(branch, start, max_move)?;
                let (r1, r2) = m.radii(p);
                if r1.min(r2) < 1e-12 {
                    return None;
                }
                let near_zero = m.g_hat(branch, p).abs() <= 1e-9;
                (near_zero && m.h_residual(p) <= cfg.zero_tol).then_some(p)
            });
            match p {
                Some(p) => {
                    if cur.last() != Some(&p) {
                        res.max_residual = res.max_residual.max(m.h_residual(p));
                        cur.push(p);
                    }
                }
                None => {
                    res.rejected += 1;
                    if cur.len() > 1 {
                        res.polylines.push(std::mem::take(&mut cur));
                    }
                    cur.clear();
                }
            }
        }
        if cur.len() > 1 {
            res.polylines.push(cur);
        }
    }
    res
}

/// Traces the four branches of `Z(R)` in the window.
pub fn trace(s: &Scenario, cfg: &TraceConfig) -> Result<TraceResult> {
    cfg.validate()?;
    let m = RealModel::new(s)?;
    let (x0, _, y0, _) = cfg.window;
    let (dx, dy) = cfg.cell();
    let (nx, ny) = cfg.grid;
    let grid = Grid::build(&m, x0, y0, dx, dy, nx, ny);
    // Cell blocks around each sensor are re-sampled more finely.
    let blocks: Vec<(usize, usize, usize, usize)> = SENSORS
        .iter()
        .filter_map(|&(sx, sy)| {
            let ci = ((sx - x0) / dx).floor();
            let cj = ((sy - y0) / dy).floor();
            if ci < 0.0 || cj < 0.0 || ci >= (nx - 1) as f64 || cj >= (ny - 1) as f64 {
                return None;
            }
            let (ci, cj) = (ci as usize, cj as usize);
            Some((
                ci.saturating_sub(2),
                cj.saturating_sub(2),
                (ci + 2).min(nx - 2),
                (cj + 2).min(ny - 2),
            ))
        })
        .collect();
    let in_block = |i: usize, j: usize| {
        blocks
            .iter()
            .any(|&(a, b, c, d)| i >= a && i <= c && j >= b && j <= d)
    };
    let sub = 1usize << cfg.refine_depth;
    let subgrids: Vec<Grid> = blocks
        .iter()
        .map(|&(a, b, c, d)| {
            let (px, py) = grid.pos(a, b);
            let (sdx, sdy) = (dx / sub as f64, dy / sub as f64);
            Grid::build(
                &m,
                px,
                py,
                sdx,
                sdy,
                (c - a + 1) * sub + 1,
                (d - b + 1) * sub + 1,
            )
        })
        .collect();
    let alpha = s
        .equal_velocity_v()
        .filter(|v| !v.is_zero())
        .map(|v| (&s.d * &v.inv().unwrap()).to_c64().re);
    let mut branches = Vec::new();
    let mut rejected = 0;
    let mut max_residual = 0.0f64;
    for b in Branch::ALL {
        let mut c = collect_polylines(&m, &grid, b, cfg, &in_block);
        for g in &subgrids {
            let more = collect_polylines(&m, g, b, cfg, &|_, _| false);
            c.polylines.extend(more.polylines);
            c.rejected += more.rejected;
            c.max_residual = c.max_residual.max(more.max_residual);
        }
        rejected += c.rejected;
        max_residual = max_residual.max(c.max_residual);
        branches.push(TracedBranch {
            label: b,
            polylines: c.polylines,
            alpha,
        });
    }
    let (wx0, wx1, wy0, wy1) = cfg.window;
    let touches_boundary = branches
        .iter()
        .map(|br| {
            let t = br
                .vertices()
                .any(|p| p.0 - wx0 <= dx || wx1 - p.0 <= dx || p.1 - wy0 <= dy || wy1 - p.1 <= dy);
            (br.label, t)
        })
        .collect();
    Ok(TraceResult {
        branches,
        max_residual,
        rejected,
        touches_boundary,
    })
}

/// As [`trace`], but an empty result is [`Error::EmptyWindow`].
pub fn trace_z(s: &Scenario, cfg: &TraceConfig) -> Result<Vec<Polyline>> {
    let r = trace(s, cfg)?;
    let all: Vec<Polyline> = r.branches.into_iter().flat_map(|b| b.polylines).collect();
    if all.is_empty() {
        Err(Error::EmptyWindow)
    } else {
        Ok(all)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct A0Report {
    pub checked: usize,
    pub max_deviation: f64,
}

/// Every vertex of `A++` must have FDOA value `d` to within `1e-6`.
pub fn validate_a0(s: &Scenario, branch: &TracedBranch) -> Result<A0Report> {
    if branch.label != Branch::App {
        return Err(Error::InvalidConfig(format!(
            "expected App, got {}",
            branch.label.label()
        )));
    }
    let d = s.d.to_c64().re;
    let mut max_deviation = 0.0f64;
    let mut bad = 0;
    let mut checked = 0;
    for &p in branch.vertices() {
        let dev = (fdoa_value(p, s)? - d).abs();
        checked += 1;
        max_deviation = max_deviation.max(dev);
        if dev > 1e-6 {
            bad += 1;
        }
    }
    if bad > 0 {
        Err(Error::ValidationFailure {
            count: bad,
            max_deviation,
        })
    } else {
        Ok(A0Report {
            checked,
            max_deviation,
        })
    }
}

/// Writes an SVG 1.1 plot of the branches over `window`, with sensor markers.
pub fn emit_svg(
    branches: &[TracedBranch],
    window: (f64, f64, f64, f64),
    path: &Path,
) -> Result<()> {
    std::fs::write(path, render_svg(branches, window)).map_err(|e| Error::Io(e.to_string()))
}

pub fn render_svg(branches: &[TracedBranch], window: (f64, f64, f64, f64)) -> String {
    let (x0, x1, y0, y1) = window;
    let size = 600.0;
    let sx = size / (x1 - x0);
    let sy = size / (y1 - y0);
    let map = |p: (f64, f64)| ((p.0 - x0) * sx, (y1 - p.1) * sy);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ax, ay) = map((0.0, 0.0));
    let _ = writeln!(
        out,
        r##"<line x1="0" y1="{ay:.3}" x2="{size}" y2="{ay:.3}" stroke="#cccccc"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line x1="{ax:.3}" y1="0" x2="{ax:.3}" y2="{size}" stroke="#cccccc"/>"##
    );
    for b in branches {
        let _ = writeln!(
            out,
            r#"<g id="{}" stroke="{}" fill="none" stroke-width="1.5">"#,
            b.label.label(),
            b.label.color()
        );
        for line in &b.polylines {
            let pts: Vec<String> = line
                .iter()
                .map(|&p| {
                    let (u, v) = map(p);
                    format!("{u:.3},{v:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(out, "</g>");
    }
    for s in SENSORS {
        let (u, v) = map(s);
        let _ = writeln!(
            out,
            r#"<circle class="sensor" cx="{u:.3}" cy="{v:.3}" r="4" fill="black"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

/// CSV with header `y1,y2,branch,alpha`; polylines are separated by an empty row.
pub fn emit_csv(branches: &[TracedBranch], path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["y1", "y2", "branch", "alpha"])
        .map_err(io)?;
    for b in branches {
        let alpha = b.alpha.map(|a| a.to_string()).unwrap_or_default();
        for line in &b.polylines {
            for &(y1, y2) in line {
                w.write_record([
                    y1.to_string(),
                    y2.to_string(),
                    b.label.label().to_string(),
                    alpha.clone(),
                ])
                .map_err(io)?;
            }
            w.write_record(["", "", "", ""]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Reads a file written by [`emit_csv`]; branches with no rows come back empty.
pub fn load_csv(path: &Path) -> Result<Vec<TracedBranch>> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let mut out: Vec<TracedBranch> = Branch::ALL
        .into_iter()
        .map(|b| TracedBranch {
            label: b,
            polylines: Vec::new(),
            alpha: None,
        })
        .collect();
    let mut cur: Option<(Branch, Polyline)> = None;
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| Error::Io(format!("bad number {s:?}: {e}")))
    };
    for rec in r.records() {
        let rec = rec.map_err(io)?;
        if rec.iter().all(str::is_empty) {
            if let Some((b, line)) = cur.take() {
                out[b.index()].polylines.push(line);
            }
            continue;
        }
        let b = Branch::from_label(&rec[2])
            .ok_or_else(|| Error::Io(format!("unknown branch {:?}", &rec[2])))?;
        if !rec[3].is_empty() {
            out[b.index()].alpha = Some(parse(&rec[3])?);
        }
        let p = (parse(&rec[0])?, parse(&rec[1])?);
        match &mut cur {
            Some((cb, line)) if *cb == b => line.push(p),
            _ => {
                if let Some((cb, line)) = cur.take() {
                    out[cb.index()].polylines.push(line);
                }
                cur = Some((b, vec![p]));
            }
        }
    }
    if let Some((b, line)) = cur {
        out[b.index()].polylines.push(line);
    }
    Ok(out)
}

/// Equal-velocity scenario with `v = 1` and `d = alpha`, from a float.
pub fn equal_velocity_alpha(alpha: f64) -> Result<Scenario> {
    let d = num_rational::BigRational::from_float(alpha)
        .ok_or_else(|| Error::InvalidConfig(format!("alpha {alpha} is not finite")))?;
    Scenario::equal_velocity(Scalar::one(), Scalar::from_rational(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TraceConfig {
        TraceConfig {
            grid: (160, 160),
            ..TraceConfig::default()
        }
    }

    #[test]
    fn config_checks() {
        assert!(TraceConfig::default().validate().is_ok());
        let bad = TraceConfig {
            grid: (8, 100),
            ..TraceConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TraceConfig {
            window: (1.0, 1.0, 0.0, 1.0),
            ..TraceConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sensor_is_every_branch() {
        let s = equal_velocity_alpha(0.5).unwrap();
        assert_eq!(classify_branch((1.0, 0.0), &s).unwrap().len(), 4);
        let d0 = equal_velocity_alpha(0.0).unwrap();
        let l = classify_branch((0.0, 0.7), &d0).unwrap();
        assert!(l.contains(&Branch::App) && l.contains(&Branch::Amm));
        assert!(matches!(
            classify_branch((0.3, 0.4), &s),
            Err(Error::NoBranch)
        ));
    }

    #[test]
    fn quarter_alpha_traces_and_validates() {
        let s = equal_velocity_alpha(0.25).unwrap();
        let r = trace(&s, &small()).unwrap();
        for b in Branch::ALL {
            assert!(!r.branch(b).is_empty(), "{b:?}");
        }
        let rep = validate_a0(&s, r.branch(Branch::App)).unwrap();
        assert!(rep.checked > 0 && rep.max_deviation <= 1e-6);
        assert!(r.max_residual <= 1e-10);
        let m = RealModel::new(&s).unwrap();
        for &p in r.branch(Branch::App).vertices() {
            assert!(classify_with(&m, p, 1e-8).unwrap().contains(&Branch::App));
        }
    }

    #[test]
    fn beyond_cauchy_schwarz_is_empty() {
        let s = equal_velocity_alpha(2.5).unwrap();
        let r = trace(&s, &small()).unwrap();
        assert_eq!(
            r.branches
                .iter()
                .map(|b| b.off_sensor(1e-3).count())
                .sum::<usize>(),
            0
        );
        assert!(matches!(trace_z(&s, &small()), Err(Error::EmptyWindow)));
    }

    #[test]
    fn csv_round_trip() {
        let s = equal_velocity_alpha(0.5).unwrap();
        let r = trace(
            &s,
            &TraceConfig {
                grid: (64, 64),
                ..TraceConfig::default()
            },
        )
        .unwrap();
        let dir = std::env::temp_dir().join(format!("fdoa-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("t.csv");
        emit_csv(&r.branches, &p).unwrap();
        assert_eq!(load_csv(&p).unwrap(), r.branches);
        let svg = render_svg(&[], TraceConfig::default().window);
        assert_eq!(svg.matches("class=\"sensor\"").count(), 2);
        assert!(!svg.contains("<polyline"));
    }
}
