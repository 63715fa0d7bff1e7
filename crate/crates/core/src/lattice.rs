//! Square-lattice geometry: vertices, canonical edges, edge sets, boxes,
//! edge boundaries and box-components.
//!
//! Every edge of Z² has exactly one encoding: `H x y` is the edge
//! `{(x,y),(x+1,y)}` and `V x y` is the edge `{(x,y),(x,y+1)}`. Edge sets
//! iterate in lexicographic order on `(orientation, y, x)`, which makes all
//! strategy play-outs reproducible.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Largest edge count accepted by [`enumerate_connected_edge_sets`].
pub const MAX_ENUMERATION_EDGES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub fn neighbours(self) -> [Vertex; 4] {
        [Vertex::new(self.x + 1, self.y), Vertex::new(self.x - 1, self.y), Vertex::new(self.x, self.y + 1), Vertex::new(self.x, self.y - 1)]
    }

    /// ℓ∞ distance.
    pub fn chebyshev(self, other: Vertex) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn translate(self, dx: i32, dy: i32) -> Vertex {
        Vertex::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

/// A canonical undirected lattice edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub orient: Orientation,
    pub x: i32,
    pub y: i32,
}

impl Edge {
    pub const fn h(x: i32, y: i32) -> Self {
        Edge { orient: Orientation::H, x, y }
    }

    pub const fn v(x: i32, y: i32) -> Self {
        Edge { orient: Orientation::V, x, y }
    }

    /// The edge joining two adjacent vertices, or `None` if they are not adjacent.
    pub fn between(a: Vertex, b: Vertex) -> Option<Edge> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        match (hi.x - lo.x, hi.y - lo.y) {
            (1, 0) => Some(Edge::h(lo.x, lo.y)),
            (0, 1) => Some(Edge::v(lo.x, lo.y)),
            _ => None,
        }
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        let a = Vertex::new(self.x, self.y);
        match self.orient {
            Orientation::H => [a, Vertex::new(self.x + 1, self.y)],
            Orientation::V => [a, Vertex::new(self.x, self.y + 1)],
        }
    }

    pub fn touches(self, v: Vertex) -> bool {
        let [a, b] = self.endpoints();
        a == v || b == v
    }

    /// True if the two edges share at least one endpoint.
    pub fn shares_vertex(self, other: Edge) -> bool {
        let [a, b] = other.endpoints();
        self.touches(a) || self.touches(b)
    }

    pub fn other_end(self, v: Vertex) -> Option<Vertex> {
        let [a, b] = self.endpoints();
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    pub fn translate(self, dx: i32, dy: i32) -> Edge {
        Edge { orient: self.orient, x: self.x + dx, y: self.y + dy }
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.orient, self.y, self.x).cmp(&(other.orient, other.y, other.x))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.orient {
            Orientation::H => "H",
            Orientation::V => "V",
        };
        write!(f, "{} {} {}", tag, self.x, self.y)
    }
}

impl FromStr for Edge {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let edges = parse_edges(s)?;
        match edges.as_slice() {
            [e] => Ok(*e),
            _ => Err(LatticeError::Parse(format!("expected exactly one edge in {s:?}"))),
        }
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a whitespace-separated run of `H x y` / `V x y` token groups.
pub fn parse_edges(s: &str) -> Result<Vec<Edge>, LatticeError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if !tokens.len().is_multiple_of(3) {
        return Err(LatticeError::Parse(format!("edge list has {} tokens, not a multiple of 3", tokens.len())));
    }
    tokens
        .chunks(3)
        .map(|t| {
            let x = t[1].parse::<i32>().map_err(|e| LatticeError::Parse(format!("bad x {:?}: {e}", t[1])))?;
            let y = t[2].parse::<i32>().map_err(|e| LatticeError::Parse(format!("bad y {:?}: {e}", t[2])))?;
            match t[0] {
                "H" => Ok(Edge::h(x, y)),
                "V" => Ok(Edge::v(x, y)),
                other => Err(LatticeError::Parse(format!("bad orientation {other:?}"))),
            }
        })
        .collect()
}

pub fn format_edges<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> String {
    edges.into_iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

/// The 4 canonical edges containing `v`.
pub fn incident_edges(v: Vertex) -> EdgeSet {
    EdgeSet::from_iter([Edge::h(v.x, v.y), Edge::h(v.x - 1, v.y), Edge::v(v.x, v.y), Edge::v(v.x, v.y - 1)])
}

pub fn incident_array(v: Vertex) -> [Edge; 4] {
    [Edge::h(v.x, v.y), Edge::h(v.x - 1, v.y), Edge::v(v.x, v.y), Edge::v(v.x, v.y - 1)]
}

/// A finite set of edges iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        self.0.remove(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Edge> + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<Edge> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn extend(&mut self, edges: impl IntoIterator<Item = Edge>) {
        self.0.extend(edges)
    }

    pub fn retain(&mut self, f: impl FnMut(&Edge) -> bool) {
        self.0.retain(f)
    }

    /// All endpoints of the edges.
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.0.iter().flat_map(|e| e.endpoints()).collect()
    }

    pub fn translate(&self, dx: i32, dy: i32) -> EdgeSet {
        self.0.iter().map(|e| e.translate(dx, dy)).collect()
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl IntoIterator for EdgeSet {
    type Item = Edge;
    type IntoIter = std::collections::btree_set::IntoIter<Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Extend<Edge> for EdgeSet {
    fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_edges(self.iter()))
    }
}

/// All edges outside `set` with at least one endpoint among the endpoints of `set`.
pub fn edge_boundary(set: &EdgeSet) -> EdgeSet {
    let mut out = EdgeSet::new();
    for v in set.vertices() {
        for e in incident_array(v) {
            if !set.contains(&e) {
                out.insert(e);
            }
        }
    }
    out
}

/// Size of the edge boundary of the subgraph with edge set `set` and vertex
/// set `vertices` (which must contain every endpoint of `set`).
pub fn boundary_size_with_vertices(set: &EdgeSet, vertices: &BTreeSet<Vertex>) -> usize {
    let mut seen = HashSet::new();
    for &v in vertices {
        for e in incident_array(v) {
            if !set.contains(&e) {
                seen.insert(e);
            }
        }
    }
    seen.len()
}

/// Axis-aligned vertex rectangle `[xmin,xmax]×[ymin,ymax]` together with all
/// lattice edges induced by it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeBox {
    pub xmin: i32,
    pub xmax: i32,
    pub ymin: i32,
    pub ymax: i32,
}

impl LatticeBox {
    pub fn new(xmin: i32, xmax: i32, ymin: i32, ymax: i32) -> Result<Self, LatticeError> {
        if xmin > xmax || ymin > ymax {
            return Err(LatticeError::InvalidBox { xmin, xmax, ymin, ymax });
        }
        Ok(LatticeBox { xmin, xmax, ymin, ymax })
    }

    pub fn point(v: Vertex) -> Self {
        LatticeBox { xmin: v.x, xmax: v.x, ymin: v.y, ymax: v.y }
    }

    /// `B_d(v) = v + [-d,d]²`.
    pub fn ball(v: Vertex, d: i32) -> Self {
        LatticeBox { xmin: v.x - d, xmax: v.x + d, ymin: v.y - d, ymax: v.y + d }
    }

    /// Vertex count of the horizontal sides.
    pub fn width(&self) -> i32 {
        self.xmax - self.xmin + 1
    }

    /// Vertex count of the vertical sides.
    pub fn height(&self) -> i32 {
        self.ymax - self.ymin + 1
    }

    pub fn is_single_vertex(&self) -> bool {
        self.xmin == self.xmax && self.ymin == self.ymax
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.xmin <= v.x && v.x <= self.xmax && self.ymin <= v.y && v.y <= self.ymax
    }

    pub fn contains_box(&self, other: &LatticeBox) -> bool {
        self.xmin <= other.xmin && other.xmax <= self.xmax && self.ymin <= other.ymin && other.ymax <= self.ymax
    }

    /// Both endpoints inside, i.e. `e ∈ E(B)`.
    pub fn contains_edge(&self, e: Edge) -> bool {
        let [a, b] = e.endpoints();
        self.contains(a) && self.contains(b)
    }

    /// At least one endpoint inside, i.e. `e ∈ E(B) ∪ ∂B`.
    pub fn touches_edge(&self, e: Edge) -> bool {
        let [a, b] = e.endpoints();
        self.contains(a) || self.contains(b)
    }

    /// Exactly one endpoint inside, i.e. `e ∈ ∂B`.
    pub fn is_boundary_edge(&self, e: Edge) -> bool {
        let [a, b] = e.endpoints();
        self.contains(a) != self.contains(b)
    }

    pub fn on_border(&self, v: Vertex) -> bool {
        self.contains(v) && (v.x == self.xmin || v.x == self.xmax || v.y == self.ymin || v.y == self.ymax)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (self.ymin..=self.ymax).flat_map(move |y| (self.xmin..=self.xmax).map(move |x| Vertex::new(x, y)))
    }

    pub fn vertex_count(&self) -> usize {
        self.width() as usize * self.height() as usize
    }

    /// `E(B)` in canonical order.
    pub fn edges(&self) -> EdgeSet {
        self.edge_iter().collect()
    }

    /// `|E(B)|`.
    pub fn edge_count(&self) -> usize {
        let (w, h) = (self.width() as usize, self.height() as usize);
        (w - 1) * h + w * (h - 1)
    }

    /// The `i`-th edge of `E(B)` in canonical order.
    pub fn nth_edge(&self, i: usize) -> Option<Edge> {
        let (w, h) = (self.width() as usize, self.height() as usize);
        let horizontal = (w - 1) * h;
        if i < horizontal {
            Some(Edge::h(self.xmin + (i % (w - 1)) as i32, self.ymin + (i / (w - 1)) as i32))
        } else if i < self.edge_count() {
            let j = i - horizontal;
            Some(Edge::v(self.xmin + (j % w) as i32, self.ymin + (j / w) as i32))
        } else {
            None
        }
    }

    /// `E(B)` in canonical order, without collecting.
    pub fn edge_iter(&self) -> impl Iterator<Item = Edge> + '_ {
        let h = (self.ymin..=self.ymax).flat_map(move |y| (self.xmin..self.xmax).map(move |x| Edge::h(x, y)));
        let v = (self.ymin..self.ymax).flat_map(move |y| (self.xmin..=self.xmax).map(move |x| Edge::v(x, y)));
        h.chain(v)
    }

    /// `∂B` in canonical order.
    pub fn boundary(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        out.extend(self.bottom_side());
        out.extend(self.top_side());
        out.extend(self.left_side());
        out.extend(self.right_side());
        out
    }

    /// Boundary edges below the bottom row, ordered by increasing x.
    pub fn bottom_side(&self) -> Vec<Edge> {
        (self.xmin..=self.xmax).map(|x| Edge::v(x, self.ymin - 1)).collect()
    }

    /// Boundary edges above the top row, ordered by increasing x.
    pub fn top_side(&self) -> Vec<Edge> {
        (self.xmin..=self.xmax).map(|x| Edge::v(x, self.ymax)).collect()
    }

    /// Boundary edges left of the left column, ordered by increasing y.
    pub fn left_side(&self) -> Vec<Edge> {
        (self.ymin..=self.ymax).map(|y| Edge::h(self.xmin - 1, y)).collect()
    }

    /// Boundary edges right of the right column, ordered by increasing y.
    pub fn right_side(&self) -> Vec<Edge> {
        (self.ymin..=self.ymax).map(|y| Edge::h(self.xmax, y)).collect()
    }

    /// `|∂B| = 2a + 2b` with `a`, `b` the side vertex counts.
    pub fn boundary_size(&self) -> usize {
        2 * (self.width() as usize + self.height() as usize)
    }

    pub fn union_bb(&self, other: &LatticeBox) -> LatticeBox {
        LatticeBox {
            xmin: self.xmin.min(other.xmin),
            xmax: self.xmax.max(other.xmax),
            ymin: self.ymin.min(other.ymin),
            ymax: self.ymax.max(other.ymax),
        }
    }

    pub fn include(&self, v: Vertex) -> LatticeBox {
        self.union_bb(&LatticeBox::point(v))
    }

    pub fn expand(&self, k: i32) -> LatticeBox {
        LatticeBox { xmin: self.xmin - k, xmax: self.xmax + k, ymin: self.ymin - k, ymax: self.ymax + k }
    }

    pub fn overlaps(&self, other: &LatticeBox) -> bool {
        self.xmin <= other.xmax && other.xmin <= self.xmax && self.ymin <= other.ymax && other.ymin <= self.ymax
    }

    /// `(E(self) ∪ ∂self) ∩ E(other) ≠ ∅`.
    ///
    /// Such an edge exists iff `other` has an edge at all and the two vertex
    /// rectangles share a vertex. Not symmetric when one side is a single vertex.
    pub fn box_intersects(&self, other: &LatticeBox) -> bool {
        !other.is_single_vertex() && self.overlaps(other)
    }
}

impl fmt::Display for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.xmin, self.xmax, self.ymin, self.ymax)
    }
}

pub fn box_intersects(b1: &LatticeBox, b2: &LatticeBox) -> bool {
    b1.box_intersects(b2)
}

/// Merge relation used by the box-component process: either direction of
/// [`box_intersects`].
pub fn boxes_related(a: &LatticeBox, b: &LatticeBox) -> bool {
    a.box_intersects(b) || b.box_intersects(a)
}

pub fn bounding_box(set: &EdgeSet) -> Result<LatticeBox, LatticeError> {
    bounding_box_of_vertices(set.iter().flat_map(|e| e.endpoints())).ok_or(LatticeError::EmptyInput("bounding box"))
}

pub fn bounding_box_of_vertices(vs: impl IntoIterator<Item = Vertex>) -> Option<LatticeBox> {
    let mut it = vs.into_iter();
    let first = it.next()?;
    Some(it.fold(LatticeBox::point(first), |b, v| b.include(v)))
}

pub fn box_boundary_size(b: &LatticeBox) -> usize {
    b.boundary_size()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of the graph spanned by `set`, each with its vertices.
pub fn connected_components(set: &EdgeSet) -> Vec<(EdgeSet, BTreeSet<Vertex>)> {
    let mut index: HashMap<Vertex, usize> = HashMap::new();
    let mut verts = Vec::new();
    for e in set {
        for v in e.endpoints() {
            index.entry(v).or_insert_with(|| {
                verts.push(v);
                verts.len() - 1
            });
        }
    }
    let mut uf = UnionFind::new(verts.len());
    for e in set {
        let [a, b] = e.endpoints();
        uf.union(index[&a], index[&b]);
    }
    let mut groups: HashMap<usize, (EdgeSet, BTreeSet<Vertex>)> = HashMap::new();
    for e in set {
        let root = uf.find(index[&e.endpoints()[0]]);
        let g = groups.entry(root).or_default();
        g.0.insert(*e);
        g.1.extend(e.endpoints());
    }
    let mut out: Vec<_> = groups.into_values().collect();
    out.sort();
    out
}

pub fn is_connected(set: &EdgeSet) -> bool {
    connected_components(set).len() <= 1
}

/// Runs the merge process on `boxes`: while two boxes are related, replace
/// them with the bounding box of their union. `pick` chooses which related
/// pair to merge next from the current candidate list.
pub fn merge_boxes_with(mut boxes: Vec<LatticeBox>, mut pick: impl FnMut(&[(usize, usize)]) -> usize) -> Vec<LatticeBox> {
    loop {
        let mut pairs = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes_related(&boxes[i], &boxes[j]) {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.is_empty() {
            break;
        }
        let (i, j) = pairs[pick(&pairs) % pairs.len()];
        let merged = boxes[i].union_bb(&boxes[j]);
        boxes.swap_remove(j);
        boxes[i] = merged;
    }
    boxes.sort();
    boxes
}

fn merge_boxes(mut boxes: Vec<LatticeBox>) -> Vec<LatticeBox> {
    // Greedy sweep: grow each box to a fixpoint before moving on.
    let mut i = 0;
    while i < boxes.len() {
        let mut changed = true;
        while changed {
            changed = false;
            let mut j = 0;
            while j < boxes.len() {
                if j != i && boxes_related(&boxes[i], &boxes[j]) {
                    boxes[i] = boxes[i].union_bb(&boxes[j]);
                    boxes.remove(j);
                    if j < i {
                        i -= 1;
                    }
                    changed = true;
                } else {
                    j += 1;
                }
            }
        }
        i += 1;
    }
    boxes.sort();
    boxes
}

/// Box-components of `set`, in canonical (sorted) order.
pub fn box_components(set: &EdgeSet) -> Vec<LatticeBox> {
    box_components_with(set, &[])
}

/// Box-components of `set` plus extra single-vertex components (vertices
/// not covered by any edge of `set`).
pub fn box_components_with(set: &EdgeSet, extra: &[Vertex]) -> Vec<LatticeBox> {
    merge_boxes(initial_boxes(set, extra))
}

/// Bounding boxes of the connected components, before merging.
pub fn initial_boxes(set: &EdgeSet, extra: &[Vertex]) -> Vec<LatticeBox> {
    let comps = connected_components(set);
    let mut boxes: Vec<LatticeBox> =
        comps.iter().map(|(_, vs)| bounding_box_of_vertices(vs.iter().copied()).expect("component has vertices")).collect();
    for &v in extra {
        if !comps.iter().any(|(_, vs)| vs.contains(&v)) {
            boxes.push(LatticeBox::point(v));
        }
    }
    boxes
}

pub fn is_box_connected(set: &EdgeSet) -> Result<bool, LatticeError> {
    if set.is_empty() {
        return Err(LatticeError::EmptyInput("box connectivity"));
    }
    Ok(box_components(set).len() == 1)
}

fn normalize(edges: &mut [Edge]) {
    let min = edges.iter().flat_map(|e| e.endpoints()).min().expect("non-empty");
    for e in edges.iter_mut() {
        *e = e.translate(-min.x, -min.y);
    }
    edges.sort();
}

/// Every connected edge subgraph of Z² with exactly `n` edges, up to
/// translation. Each set is translated so that its least endpoint (ordered by
/// `(x, y)`) is the origin; rotations and reflections are kept distinct.
pub fn enumerate_connected_edge_sets(n: usize) -> Result<Vec<EdgeSet>, LatticeError> {
    if n == 0 || n > MAX_ENUMERATION_EDGES {
        return Err(LatticeError::Budget { requested: n, max: MAX_ENUMERATION_EDGES });
    }
    let mut level: HashSet<Vec<Edge>> = HashSet::new();
    level.insert(vec![Edge::h(0, 0)]);
    level.insert(vec![Edge::v(0, 0)]);
    for _ in 1..n {
        let mut next = HashSet::with_capacity(level.len() * 5);
        for set in &level {
            let es: EdgeSet = set.iter().copied().collect();
            for f in edge_boundary(&es) {
                let mut grown = set.clone();
                grown.push(f);
                normalize(&mut grown);
                next.insert(grown);
            }
        }
        level = next;
    }
    let mut out: Vec<Vec<Edge>> = level.into_iter().collect();
    out.sort();
    Ok(out.into_iter().map(EdgeSet::from_iter).collect())
}
