//! Bond-percolation boards on finite windows: sampling, the board file
//! format, open clusters, quadrant reaches and barredness certificates.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::lattice::{parse_edges, Edge, EdgeSet, LatticeBox, Orientation, Vertex};

/// Dense per-edge storage over the induced edges of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGrid<T> {
    window: LatticeBox,
    w: usize,
    h: usize,
    cells: Vec<T>,
}

impl<T: Copy> EdgeGrid<T> {
    pub fn new(window: LatticeBox, fill: T) -> Self {
        let w = window.width() as usize;
        let h = window.height() as usize;
        EdgeGrid { window, w, h, cells: vec![fill; 2 * w * h] }
    }

    pub fn window(&self) -> &LatticeBox {
        &self.window
    }

    pub fn index(&self, e: Edge) -> Option<usize> {
        if !self.window.contains_edge(e) {
            return None;
        }
        let o = match e.orient {
            Orientation::H => 0,
            Orientation::V => 1,
        };
        let x = (e.x - self.window.xmin) as usize;
        let y = (e.y - self.window.ymin) as usize;
        Some(o * self.w * self.h + y * self.w + x)
    }

    pub fn get(&self, e: Edge) -> Option<T> {
        self.index(e).map(|i| self.cells[i])
    }

    /// Panics if `e` is not induced by the window.
    pub fn set(&mut self, e: Edge, value: T) {
        let i = self.index(e).expect("edge inside grid window");
        self.cells[i] = value;
    }

    /// Cells of the `orient` edges anchored at `(x0..=x1, y)`, all induced by the window.
    pub fn row(&self, orient: Orientation, y: i32, x0: i32, x1: i32) -> &[T] {
        let start = self.index(Edge { orient, x: x0, y }).expect("row start inside grid window");
        let end = self.index(Edge { orient, x: x1, y }).expect("row end inside grid window");
        &self.cells[start..=end]
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        (v.y - self.window.ymin) as usize * self.w + (v.x - self.window.xmin) as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.w * self.h
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        Vertex::new(self.window.xmin + (i % self.w) as i32, self.window.ymin + (i / self.w) as i32)
    }
}

/// A window of Z² whose induced edges are open independently with probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PollutedBoard {
    window: LatticeBox,
    p: f64,
    seed: u64,
    open: EdgeGrid<bool>,
    open_count: usize,
}

fn zigzag(v: i32) -> u64 {
    ((v << 1) ^ (v >> 31)) as u32 as u64
}

/// Position-keyed stream index of an edge; independent of any window.
fn edge_stream(e: Edge) -> u128 {
    let o = match e.orient {
        Orientation::H => 0,
        Orientation::V => 1,
    };
    (((zigzag(e.x) << 32) | zigzag(e.y)) as u128) * 2 + o
}

fn edge_uniform(rng: &mut ChaCha8Rng, e: Edge) -> f64 {
    rng.set_word_pos(edge_stream(e) * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl PollutedBoard {
    /// Each induced edge of `window` is open iff its own uniform draw, keyed on
    /// `(seed, edge)`, is below `p`. Sub-windows and other values of `p` reuse
    /// the same draws.
    pub fn sample(window: LatticeBox, p: f64, seed: u64) -> Result<Self, FormatError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(FormatError::syntax(0, format!("p = {p} outside [0,1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut open = EdgeGrid::new(window, false);
        let mut open_count = 0;
        for e in window.edges() {
            if edge_uniform(&mut rng, e) < p {
                open.set(e, true);
                open_count += 1;
            }
        }
        Ok(PollutedBoard { window, p, seed, open, open_count })
    }

    /// A board with an explicit open set; `p` and `seed` are recorded only.
    pub fn from_open(window: LatticeBox, p: f64, seed: u64, edges: impl IntoIterator<Item = Edge>) -> Result<Self, FormatError> {
        let mut open = EdgeGrid::new(window, false);
        let mut open_count = 0;
        for e in edges {
            if open.get(e).is_none() {
                return Err(FormatError::syntax(0, format!("edge {e} outside window {window}")));
            }
            if !open.get(e).unwrap() {
                open.set(e, true);
                open_count += 1;
            }
        }
        Ok(PollutedBoard { window, p, seed, open, open_count })
    }

    pub fn window(&self) -> &LatticeBox {
        &self.window
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_open(&self, e: Edge) -> bool {
        self.open.get(e).unwrap_or(false)
    }

    pub fn open_count(&self) -> usize {
        self.open_count
    }

    pub fn open_edges(&self) -> EdgeSet {
        self.window.edges().into_iter().filter(|&e| self.is_open(e)).collect()
    }

    pub fn open_grid(&self) -> &EdgeGrid<bool> {
        &self.open
    }

    /// True if the listed open set is exactly what the header regenerates.
    pub fn matches_header(&self) -> bool {
        match PollutedBoard::sample(self.window, self.p, self.seed) {
            Ok(b) => b.open == self.open,
            Err(_) => false,
        }
    }

    pub fn header(&self) -> String {
        format!("BOARD v1 window={},{},{},{} p={} seed={}", self.window.xmin, self.window.ymin, self.window.xmax, self.window.ymax, self.p, self.seed)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for e in self.window.edges() {
            if self.is_open(e) {
                let _ = writeln!(out, "{e}");
            }
        }
        out
    }

    pub fn parse_header(line: &str) -> Result<(LatticeBox, f64, u64), FormatError> {
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("BOARD") || tokens.next() != Some("v1") {
            return Err(FormatError::syntax(1, "expected `BOARD v1`"));
        }
        let (mut window, mut p, mut seed) = (None, None, None);
        for tok in tokens {
            let (key, value) = tok.split_once('=').ok_or_else(|| FormatError::syntax(1, format!("bad field {tok:?}")))?;
            match key {
                "window" => {
                    let nums: Vec<i32> = value
                        .split(',')
                        .map(|s| s.parse::<i32>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| FormatError::syntax(1, format!("bad window: {e}")))?;
                    if nums.len() != 4 {
                        return Err(FormatError::syntax(1, "window needs 4 numbers"));
                    }
                    window = Some(LatticeBox::new(nums[0], nums[2], nums[1], nums[3])?);
                }
                "p" => p = Some(value.parse::<f64>().map_err(|e| FormatError::syntax(1, format!("bad p: {e}")))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| FormatError::syntax(1, format!("bad seed: {e}")))?),
                _ => return Err(FormatError::syntax(1, format!("unknown field {key:?}"))),
            }
        }
        match (window, p, seed) {
            (Some(w), Some(p), Some(s)) => Ok((w, p, s)),
            _ => Err(FormatError::syntax(1, "header needs window, p and seed")),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines();
        let (window, p, seed) = PollutedBoard::parse_header(lines.next().unwrap_or(""))?;
        let mut edges = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed = parse_edges(line).map_err(|e| FormatError::syntax(i + 2, e.to_string()))?;
            edges.extend(parsed);
        }
        PollutedBoard::from_open(window, p, seed, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| FormatError::io(path.as_ref(), e))?;
        PollutedBoard::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FormatError> {
        std::fs::write(path.as_ref(), self.to_text()).map_err(|e| FormatError::io(path.as_ref(), e))
    }

    /// Open neighbours of `v` inside the window.
    pub fn open_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        v.neighbours().into_iter().filter(move |&u| Edge::between(v, u).is_some_and(|e| self.is_open(e)))
    }
}

/// Vertices of the open cluster of `v`, in BFS order.
pub fn open_cluster(board: &PollutedBoard, v: Vertex) -> Vec<Vertex> {
    if !board.window().contains(v) {
        return Vec::new();
    }
    let grid = board.open_grid();
    let mut seen = vec![false; grid.vertex_count()];
    seen[grid.vertex_index(v)] = true;
    let mut out = vec![v];
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        i += 1;
        for w in board.open_neighbours(u) {
            let k = grid.vertex_index(w);
            if !seen[k] {
                seen[k] = true;
                out.push(w);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    NE,
    NW,
    SE,
    SW,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SE, Quadrant::SW];

    /// Unit steps `(dx, dy)` allowed in this quadrant.
    pub fn steps(self) -> [(i32, i32); 2] {
        match self {
            Quadrant::NE => [(1, 0), (0, 1)],
            Quadrant::NW => [(-1, 0), (0, 1)],
            Quadrant::SE => [(1, 0), (0, -1)],
            Quadrant::SW => [(-1, 0), (0, -1)],
        }
    }
}

/// Vertices reachable from `v` by open paths using only the two step
/// directions of `q`.
pub fn quadrant_reach(board: &PollutedBoard, v: Vertex, q: Quadrant) -> Vec<Vertex> {
    if !board.window().contains(v) {
        return Vec::new();
    }
    let grid = board.open_grid();
    let mut seen = vec![false; grid.vertex_count()];
    seen[grid.vertex_index(v)] = true;
    let mut queue = VecDeque::from([v]);
    let mut out = vec![v];
    while let Some(u) = queue.pop_front() {
        for (dx, dy) in q.steps() {
            let w = u.translate(dx, dy);
            if board.is_open(Edge::between(u, w).unwrap()) {
                let k = grid.vertex_index(w);
                if !seen[k] {
                    seen[k] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrednessCertificate {
    pub origin: Vertex,
    pub d: i32,
    /// Union of the four quadrant reaches, sorted.
    pub reach: Vec<Vertex>,
}

/// `None` when some quadrant reach of `v` touches the window border, since
/// the window then cannot bound it.
pub fn certify_barred(board: &PollutedBoard, v: Vertex) -> Option<BarrednessCertificate> {
    let window = board.window();
    if !window.contains(v) {
        return None;
    }
    let mut reach = Vec::new();
    for q in Quadrant::ALL {
        let r = quadrant_reach(board, v, q);
        if r.iter().any(|&u| window.on_border(u)) {
            return None;
        }
        reach.extend(r);
    }
    reach.sort();
    reach.dedup();
    let d = reach.iter().map(|&u| u.chebyshev(v)).max().unwrap_or(0);
    Some(BarrednessCertificate { origin: v, d, reach })
}

/// Certification radius for every window vertex at once (`None` where the
/// reach touches the border). Agrees with [`certify_barred`] vertex by vertex.
pub fn certified_radii(board: &PollutedBoard) -> Vec<Option<i32>> {
    let grid = board.open_grid();
    let window = *board.window();
    let n = grid.vertex_count();
    let mut radius = vec![Some(0i32); n];
    for q in Quadrant::ALL {
        let [(sx, _), (_, sy)] = q.steps();
        // Per vertex: furthest reach offset along x and y, or None on border contact.
        let mut far: Vec<Option<(i32, i32)>> = vec![None; n];
        let xs: Vec<i32> = if sx > 0 { (window.xmin..=window.xmax).rev().collect() } else { (window.xmin..=window.xmax).collect() };
        let ys: Vec<i32> = if sy > 0 { (window.ymin..=window.ymax).rev().collect() } else { (window.ymin..=window.ymax).collect() };
        for &y in &ys {
            for &x in &xs {
                let v = Vertex::new(x, y);
                let k = grid.vertex_index(v);
                if window.on_border(v) {
                    far[k] = None;
                    continue;
                }
                let mut best = Some((0, 0));
                for (dx, dy) in q.steps() {
                    let w = v.translate(dx, dy);
                    if board.is_open(Edge::between(v, w).unwrap()) {
                        match (best, far[grid.vertex_index(w)]) {
                            (Some((bx, by)), Some((fx, fy))) => best = Some((bx.max(fx + dx.abs()), by.max(fy + dy.abs()))),
                            _ => best = None,
                        }
                    }
                }
                far[k] = best;
            }
        }
        for k in 0..n {
            radius[k] = match (radius[k], far[k]) {
                (Some(r), Some((fx, fy))) => Some(r.max(fx).max(fy)),
                _ => None,
            };
        }
    }
    radius
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OriginPolicy {
    LargestCluster,
    ScanAdversarial,
}

impl std::str::FromStr for OriginPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "largest_cluster" => Ok(OriginPolicy::LargestCluster),
            "scan_adversarial" => Ok(OriginPolicy::ScanAdversarial),
            _ => Err(format!("unknown origin policy {s:?}")),
        }
    }
}

/// `LargestCluster`: first certified vertex (in `(x, y)` order) of the
/// largest open cluster that has one. `ScanAdversarial`: the certified vertex
/// with the largest radius, least `(x, y)` on ties.
pub fn choose_origin(board: &PollutedBoard, policy: OriginPolicy) -> Option<(Vertex, i32)> {
    let radii = certified_radii(board);
    let grid = board.open_grid();
    match policy {
        OriginPolicy::ScanAdversarial => {
            let mut best: Option<(Vertex, i32)> = None;
            for (k, r) in radii.iter().enumerate() {
                if let Some(d) = *r {
                    let v = grid.vertex_at(k);
                    let better = match best {
                        None => true,
                        Some((bv, bd)) => d > bd || (d == bd && v < bv),
                    };
                    if better {
                        best = Some((v, d));
                    }
                }
            }
            best
        }
        OriginPolicy::LargestCluster => {
            let n = grid.vertex_count();
            let mut label = vec![usize::MAX; n];
            let mut clusters: Vec<Vec<Vertex>> = Vec::new();
            for k in 0..n {
                if label[k] != usize::MAX {
                    continue;
                }
                let c = open_cluster(board, grid.vertex_at(k));
                for &v in &c {
                    label[grid.vertex_index(v)] = clusters.len();
                }
                clusters.push(c);
            }
            let mut order: Vec<usize> = (0..clusters.len()).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(clusters[i].len()));
            for i in order {
                let mut vs = clusters[i].clone();
                vs.sort();
                if let Some(v) = vs.into_iter().find(|&v| radii[grid.vertex_index(v)].is_some()) {
                    return Some((v, radii[grid.vertex_index(v)].unwrap()));
                }
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(r: i32) -> LatticeBox {
        LatticeBox::ball(Vertex::new(0, 0), r)
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(PollutedBoard::sample(window(5), 0.0, 3).unwrap().open_count(), 0);
        let full = PollutedBoard::sample(window(5), 1.0, 3).unwrap();
        assert_eq!(full.open_count(), window(5).edges().len());
        assert!(PollutedBoard::sample(window(5), 1.5, 3).is_err());
    }

    #[test]
    fn sampling_is_keyed_on_edges() {
        let big = PollutedBoard::sample(window(10), 0.5, 99).unwrap();
        let small = PollutedBoard::sample(LatticeBox::new(-3, 4, 2, 9).unwrap(), 0.5, 99).unwrap();
        for e in small.window().edges() {
            assert_eq!(small.is_open(e), big.is_open(e));
        }
        let again = PollutedBoard::sample(window(10), 0.5, 99).unwrap();
        assert_eq!(big, again);
    }

    #[test]
    fn board_text_round_trip() {
        let b = PollutedBoard::sample(window(4), 0.55, 7).unwrap();
        let text = b.to_text();
        assert!(text.starts_with("BOARD v1 window=-4,-4,4,4 p=0.55 seed=7\n"));
        let back = PollutedBoard::parse(&text).unwrap();
        assert_eq!(back, b);
        assert!(back.matches_header());
        assert!(PollutedBoard::parse("BOARD v2 window=0,0,1,1 p=0.5 seed=1").is_err());
    }

    #[test]
    fn single_open_edge() {
        let b = PollutedBoard::from_open(window(5), 0.0, 0, [Edge::h(0, 0)]).unwrap();
        let mut c = open_cluster(&b, Vertex::new(0, 0));
        c.sort();
        assert_eq!(c, vec![Vertex::new(0, 0), Vertex::new(1, 0)]);
        let cert = certify_barred(&b, Vertex::new(0, 0)).unwrap();
        assert_eq!(cert.d, 1);
        let (v, _) = choose_origin(&b, OriginPolicy::LargestCluster).unwrap();
        assert!(v == Vertex::new(0, 0) || v == Vertex::new(1, 0));
    }

    #[test]
    fn staircase_reach() {
        let b = PollutedBoard::from_open(window(5), 0.0, 0, [Edge::h(0, 0), Edge::v(1, 0)]).unwrap();
        let mut r = quadrant_reach(&b, Vertex::new(0, 0), Quadrant::NE);
        r.sort();
        assert_eq!(r, vec![Vertex::new(0, 0), Vertex::new(1, 0), Vertex::new(1, 1)]);
        assert_eq!(quadrant_reach(&b, Vertex::new(0, 0), Quadrant::SW), vec![Vertex::new(0, 0)]);
    }

    #[test]
    fn all_open_and_all_closed_certification() {
        let open = PollutedBoard::sample(window(5), 1.0, 1).unwrap();
        assert!(certify_barred(&open, Vertex::new(0, 0)).is_none());
        assert_eq!(open_cluster(&open, Vertex::new(0, 0)).len(), 121);
        let closed = PollutedBoard::sample(window(5), 0.0, 1).unwrap();
        assert_eq!(certify_barred(&closed, Vertex::new(0, 0)).unwrap().d, 0);
        assert_eq!(open_cluster(&closed, Vertex::new(2, 2)), vec![Vertex::new(2, 2)]);
        let (v, d) = choose_origin(&closed, OriginPolicy::ScanAdversarial).unwrap();
        assert_eq!(d, 0);
        assert!(!closed.window().on_border(v));
    }

    #[test]
    fn dense_radii_agree_with_per_vertex_certificates() {
        for seed in 0..6 {
            let b = PollutedBoard::sample(LatticeBox::new(0, 14, 0, 11).unwrap(), 0.55, seed).unwrap();
            let radii = certified_radii(&b);
            for (k, r) in radii.iter().enumerate() {
                let v = b.open_grid().vertex_at(k);
                assert_eq!(*r, certify_barred(&b, v).map(|c| c.d), "vertex {v} seed {seed}");
            }
        }
    }
}
