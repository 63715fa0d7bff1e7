//! Lattice isometries: the dihedral group D4 composed with translations.

use crate::lattice::{Edge, EdgeSet, LatticeBox, Vertex};

/// `v ↦ M·v + t` with `M` a signed permutation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    m: [[i32; 2]; 2],
    t: (i32, i32),
}

impl Frame {
    pub const IDENTITY: Frame = Frame { m: [[1, 0], [0, 1]], t: (0, 0) };

    /// The 8 linear elements of D4, identity first.
    pub fn dihedral() -> [Frame; 8] {
        let mats = [
            [[1, 0], [0, 1]],
            [[0, -1], [1, 0]],
            [[-1, 0], [0, -1]],
            [[0, 1], [-1, 0]],
            [[-1, 0], [0, 1]],
            [[1, 0], [0, -1]],
            [[0, 1], [1, 0]],
            [[0, -1], [-1, 0]],
        ];
        mats.map(|m| Frame { m, t: (0, 0) })
    }

    /// Quarter turn counter-clockwise: `(x, y) ↦ (−y, x)`.
    pub fn rotate_ccw() -> Frame {
        Frame { m: [[0, -1], [1, 0]], t: (0, 0) }
    }

    /// `(x, y) ↦ (−x, y)`.
    pub fn reflect_x() -> Frame {
        Frame { m: [[-1, 0], [0, 1]], t: (0, 0) }
    }

    pub fn translation(dx: i32, dy: i32) -> Frame {
        Frame { m: [[1, 0], [0, 1]], t: (dx, dy) }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Frame) -> Frame {
        let a = self.m;
        let b = other.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let tv = self.vertex(Vertex::new(other.t.0, other.t.1));
        Frame { m, t: (tv.x, tv.y) }
    }

    pub fn inverse(&self) -> Frame {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let lin = Frame { m: mt, t: (0, 0) };
        let t = lin.vertex(Vertex::new(-self.t.0, -self.t.1));
        Frame { m: mt, t: (t.x, t.y) }
    }

    pub fn vertex(&self, v: Vertex) -> Vertex {
        Vertex::new(self.m[0][0] * v.x + self.m[0][1] * v.y + self.t.0, self.m[1][0] * v.x + self.m[1][1] * v.y + self.t.1)
    }

    pub fn edge(&self, e: Edge) -> Edge {
        let [a, b] = e.endpoints();
        Edge::between(self.vertex(a), self.vertex(b)).expect("isometries keep adjacency")
    }

    pub fn edges<'a>(&self, set: impl IntoIterator<Item = &'a Edge>) -> EdgeSet {
        set.into_iter().map(|&e| self.edge(e)).collect()
    }

    pub fn boxed(&self, b: &LatticeBox) -> LatticeBox {
        let p = self.vertex(Vertex::new(b.xmin, b.ymin));
        let q = self.vertex(Vertex::new(b.xmax, b.ymax));
        LatticeBox { xmin: p.x.min(q.x), xmax: p.x.max(q.x), ymin: p.y.min(q.y), ymax: p.y.max(q.y) }
    }
}
