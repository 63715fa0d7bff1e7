//! Maker policies used as opponents for the Breaker strategies.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::EdgeGrid;
use crate::error::GameError;
use crate::game::{Bias, GameState, Variant};
use crate::lattice::{box_boundary_size, box_components_with, incident_array, Edge, EdgeSet, LatticeBox, Orientation, Vertex};
use crate::strategy::priority::connected_order;
use crate::survival::{MakerModel, SurvivalSearch};

pub trait Maker: Send {
    fn name(&self) -> &str;

    /// Called with Maker to move; the result must be legal for `state`.
    fn next_move(&mut self, state: &GameState) -> Vec<Edge>;
}

/// How many edges the policy should claim this round.
fn move_size(state: &GameState) -> usize {
    match state.variant {
        Variant::Unlimited => state.unlimited_move_size(),
        Variant::Limited | Variant::BoxLimited => {
            let want = state.bias.m as usize + if state.current_round() == 1 { state.bias.c as usize } else { 0 };
            want.min(state.maker_budget_left())
        }
    }
}

/// Vertex set with a dense bitmap over `area` and a sorted overflow outside it.
struct VertexMask {
    area: LatticeBox,
    dense: Vec<bool>,
    sparse: BTreeSet<Vertex>,
}

impl VertexMask {
    fn new(area: LatticeBox) -> Self {
        VertexMask { area, dense: vec![false; area.vertex_count()], sparse: BTreeSet::new() }
    }

    fn slot(&self, v: Vertex) -> Option<usize> {
        self.area.contains(v).then(|| (v.y - self.area.ymin) as usize * self.area.width() as usize + (v.x - self.area.xmin) as usize)
    }

    fn insert(&mut self, v: Vertex) {
        match self.slot(v) {
            Some(i) => self.dense[i] = true,
            None => {
                self.sparse.insert(v);
            }
        }
    }

    fn contains(&self, v: &Vertex) -> bool {
        match self.slot(*v) {
            Some(i) => self.dense[i],
            None => self.sparse.contains(v),
        }
    }
}

/// Growing move under construction, with the sets needed to list legal extensions.
struct Pending<'a> {
    state: &'a GameState,
    edges: Vec<Edge>,
    list: Vec<Vertex>,
    vertices: VertexMask,
    bbox: LatticeBox,
}

impl<'a> Pending<'a> {
    fn new(state: &'a GameState) -> Self {
        let mut set = state.maker().vertices();
        set.insert(state.origin);
        let list: Vec<Vertex> = set.into_iter().collect();
        let bbox = state.maker_box();
        let mut vertices = VertexMask::new(bbox.expand(3));
        for &v in &list {
            vertices.insert(v);
        }
        Pending { state, edges: Vec::new(), list, vertices, bbox }
    }

    fn free(&self, e: Edge) -> bool {
        self.state.is_free(e) && !self.edges.contains(&e)
    }

    fn push(&mut self, e: Edge) {
        self.edges.push(e);
        for v in e.endpoints() {
            if !self.vertices.contains(&v) {
                self.vertices.insert(v);
                self.list.push(v);
            }
            self.bbox = self.bbox.include(v);
        }
    }

    /// Free edges touching Maker's graph (or the origin).
    fn frontier(&self) -> Vec<Edge> {
        let mut out: BTreeSet<Edge> = BTreeSet::new();
        for &v in &self.list {
            for e in incident_array(v) {
                if self.free(e) {
                    out.insert(e);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Edges a legal move may add next.
    fn candidates(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        self.each_candidate(|e| out.push(e));
        out
    }

    /// Visits the legal next edges in canonical order.
    fn each_candidate(&self, mut f: impl FnMut(Edge)) {
        match self.state.variant {
            Variant::Limited => self.frontier().into_iter().for_each(f),
            Variant::BoxLimited => self.bbox.expand(1).edge_iter().filter(|&e| self.free(e) && self.bbox.touches_edge(e)).for_each(f),
            Variant::Unlimited => {
                let mut any = false;
                for e in self.bbox.expand(2).edge_iter().filter(|&e| self.free(e)) {
                    any = true;
                    f(e);
                }
                if any {
                    return;
                }
                match self.state.board.as_polluted() {
                    Some(pb) => pb.open_edges().into_iter().filter(|&e| self.free(e)).for_each(f),
                    None => self.bbox.expand(3).edge_iter().filter(|&e| self.free(e)).for_each(f),
                }
            }
        }
    }

    /// Change in the number of free edges touching Maker's graph if `e` is added.
    fn free_boundary_gain(&self, e: Edge) -> i64 {
        let [a, b] = e.endpoints();
        let mut gain = if self.vertices.contains(&a) || self.vertices.contains(&b) { -1 } else { 0 };
        for v in [a, b] {
            if self.vertices.contains(&v) {
                continue;
            }
            for f in incident_array(v) {
                if f == e || !self.free(f) {
                    continue;
                }
                let w = f.other_end(v).unwrap();
                if !self.vertices.contains(&w) {
                    gain += 1;
                }
            }
        }
        gain
    }

    fn box_gain(&self, e: Edge) -> i64 {
        let [a, b] = e.endpoints();
        box_boundary_size(&self.bbox.include(a).include(b)) as i64 - box_boundary_size(&self.bbox) as i64
    }
}

/// Uniformly random legal edges, one at a time.
pub struct RandomMaker {
    rng: ChaCha8Rng,
    name: String,
}

impl RandomMaker {
    pub fn new(seed: u64) -> Self {
        RandomMaker { rng: ChaCha8Rng::seed_from_u64(seed), name: format!("random:{seed}") }
    }
}

impl RandomMaker {
    /// Uniform over the free edges near Maker's box, by rejection from all
    /// edges of that box; the full list is built only after many misses.
    fn unlimited_move(&mut self, state: &GameState) -> Vec<Edge> {
        let mut picks: Vec<Edge> = Vec::new();
        let mut bbox = state.maker_box();
        for _ in 0..move_size(state) {
            let free = |e: Edge| state.is_free(e) && !picks.contains(&e);
            let area = bbox.expand(2);
            let mut choice = None;
            for _ in 0..64 {
                let e = area.nth_edge(self.rng.gen_range(0..area.edge_count())).unwrap();
                if free(e) {
                    choice = Some(e);
                    break;
                }
            }
            if choice.is_none() {
                let mut cand: Vec<Edge> = area.edge_iter().filter(|&e| free(e)).collect();
                if cand.is_empty() {
                    cand = match state.board.as_polluted() {
                        Some(pb) => pb.window().edge_iter().filter(|&e| free(e)).collect(),
                        None => bbox.expand(3).edge_iter().filter(|&e| free(e)).collect(),
                    };
                }
                choice = cand.choose(&mut self.rng).copied();
            }
            let Some(e) = choice else {
                break;
            };
            picks.push(e);
            for v in e.endpoints() {
                bbox = bbox.include(v);
            }
        }
        picks
    }
}

impl Maker for RandomMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        if state.variant == Variant::Unlimited {
            return self.unlimited_move(state);
        }
        let mut p = Pending::new(state);
        for _ in 0..move_size(state) {
            let cand = p.candidates();
            match cand.choose(&mut self.rng) {
                Some(&e) => p.push(e),
                None => break,
            }
        }
        p.edges
    }
}

/// Greedy choice of `k` edges: biggest free-boundary growth, and in the
/// box-limited game biggest box-boundary growth first. Ties go by `rng`.
fn greedy_edges(state: &GameState, k: usize, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    greedy_from(state, k, rng, false)
}

/// With `connected`, only edges touching Maker's graph are considered.
fn greedy_from(state: &GameState, k: usize, rng: &mut ChaCha8Rng, connected: bool) -> Vec<Edge> {
    let mut p = Pending::new(state);
    let boxed = state.variant == Variant::BoxLimited;
    for _ in 0..k {
        let mut best = (i64::MIN, i64::MIN);
        let mut top: Vec<Edge> = Vec::new();
        let mut consider = |e: Edge| {
            let score = (if boxed { p.box_gain(e) } else { 0 }, p.free_boundary_gain(e));
            if score > best {
                best = score;
                top.clear();
            }
            if score == best {
                top.push(e);
            }
        };
        if connected {
            p.frontier().into_iter().for_each(&mut consider);
        } else {
            p.each_candidate(&mut consider);
        }
        if top.is_empty() {
            break;
        }
        let e = top[rng.gen_range(0..top.len())];
        p.push(e);
    }
    p.edges
}

/// Free edges and outward free degrees over a fixed region, kept in step
/// with one unlimited game between greedy moves.
struct GainMap {
    region: LatticeBox,
    /// Edges of `region.expand(1)`.
    free: EdgeGrid<bool>,
    inside: VertexMask,
    /// Free edges at each vertex of `region` whose other end is outside Maker's graph.
    degree: Vec<i64>,
    /// Gain of each free edge induced by `region`; `i8::MIN` for claimed ones.
    score: EdgeGrid<i8>,
    maker_len: usize,
    breaker_rounds: usize,
    last_move: Vec<Edge>,
}

impl GainMap {
    fn build(state: &GameState, region: LatticeBox) -> Self {
        let outer = region.expand(1);
        let mut free = EdgeGrid::new(outer, false);
        for e in outer.edge_iter() {
            if state.is_free(e) {
                free.set(e, true);
            }
        }
        let mut inside = VertexMask::new(outer);
        inside.insert(state.origin);
        for v in state.maker().vertices() {
            inside.insert(v);
        }
        let mut map = GainMap {
            region,
            free,
            inside,
            degree: vec![0; region.vertex_count()],
            score: EdgeGrid::new(region, i8::MIN),
            maker_len: state.maker().len(),
            breaker_rounds: state.breaker_moves().len(),
            last_move: state.last_maker_move().to_vec(),
        };
        for v in region.vertices() {
            map.refresh(v);
        }
        for e in region.edge_iter() {
            map.rescore(e);
        }
        map
    }

    fn rescore(&mut self, e: Edge) {
        if self.score.index(e).is_some() {
            let g = if self.is_free(e) { self.gain(e) as i8 } else { i8::MIN };
            self.score.set(e, g);
        }
    }

    fn slot(&self, v: Vertex) -> usize {
        (v.y - self.region.ymin) as usize * self.region.width() as usize + (v.x - self.region.xmin) as usize
    }

    fn is_free(&self, e: Edge) -> bool {
        self.free.get(e) == Some(true)
    }

    fn refresh(&mut self, v: Vertex) {
        if !self.region.contains(v) {
            return;
        }
        let d = incident_array(v).into_iter().filter(|&f| self.is_free(f) && !self.inside.contains(&f.other_end(v).unwrap())).count();
        let i = self.slot(v);
        self.degree[i] = d as i64;
    }

    fn claim(&mut self, e: Edge, maker: bool) {
        if self.free.get(e).is_some() {
            self.free.set(e, false);
        }
        for v in e.endpoints() {
            if maker {
                self.inside.insert(v);
            }
        }
        let touched: Vec<Vertex> = e.endpoints().into_iter().flat_map(|v| std::iter::once(v).chain(v.neighbours())).collect();
        for &v in &touched {
            self.refresh(v);
        }
        for &v in &touched {
            for f in incident_array(v) {
                self.rescore(f);
            }
        }
    }

    /// `free_boundary_gain` of a free edge with both endpoints in `region`.
    fn gain(&self, e: Edge) -> i64 {
        let [a, b] = e.endpoints();
        let at = |v: Vertex| self.degree[self.slot(v)];
        match (self.inside.contains(&a), self.inside.contains(&b)) {
            (false, false) => at(a) + at(b) - 2,
            (true, false) => at(b) - 1,
            (false, true) => at(a) - 1,
            (true, true) => -1,
        }
    }

    /// Best-gain free edges of `area` in canonical order.
    fn top(&self, area: LatticeBox) -> Vec<Edge> {
        let r = &self.region;
        let (x0, x1, y0, y1) = (area.xmin.max(r.xmin), area.xmax.min(r.xmax), area.ymin.max(r.ymin), area.ymax.min(r.ymax));
        if x0 > x1 || y0 > y1 {
            return Vec::new();
        }
        let rows = |o: Orientation| {
            let (xe, ye) = if o == Orientation::H { (x1 - 1, y1) } else { (x1, y1 - 1) };
            (y0..=ye).filter(move |_| x0 <= xe).map(move |y| (o, y, xe))
        };
        let all: Vec<(Orientation, i32, i32)> = rows(Orientation::H).chain(rows(Orientation::V)).collect();
        let best = all.iter().filter_map(|&(o, y, xe)| self.score.row(o, y, x0, xe).iter().max().copied()).max();
        let Some(best) = best.filter(|&b| b != i8::MIN) else {
            return Vec::new();
        };
        let mut top = Vec::new();
        for (o, y, xe) in all {
            for (i, &g) in self.score.row(o, y, x0, xe).iter().enumerate() {
                if g == best {
                    top.push(Edge { orient: o, x: x0 + i as i32, y });
                }
            }
        }
        top
    }
}

pub struct GreedyMaker {
    rng: ChaCha8Rng,
    name: String,
    gains: Option<GainMap>,
}

impl GreedyMaker {
    pub fn new(seed: u64) -> Self {
        GreedyMaker { rng: ChaCha8Rng::seed_from_u64(seed), name: format!("greedy:{seed}"), gains: None }
    }

    /// Brings the gain map up to `state`, rebuilding it unless the only
    /// change since the last call is our own move plus one Breaker move.
    fn sync(&mut self, state: &GameState, k: usize) {
        let need = match state.board.as_polluted() {
            Some(pb) => *pb.window(),
            None => state.maker_box().expand(3 + 2 * k as i32),
        };
        let follows = self.gains.as_ref().is_some_and(|g| {
            g.region.contains_box(&need)
                && state.maker().len() == g.maker_len
                && state.breaker_moves().len() == g.breaker_rounds + 1
                && state.last_maker_move() == g.last_move.as_slice()
        });
        if follows {
            let g = self.gains.as_mut().unwrap();
            for &e in state.breaker_moves().last().unwrap() {
                g.claim(e, false);
            }
            g.breaker_rounds += 1;
        } else {
            let region = match state.board.as_polluted() {
                Some(_) => need,
                None => need.expand(16),
            };
            self.gains = Some(GainMap::build(state, region));
        }
    }

    fn unlimited_move(&mut self, state: &GameState) -> Vec<Edge> {
        let k = move_size(state);
        self.sync(state, k);
        let g = self.gains.as_mut().unwrap();
        let mut bbox = state.maker_box();
        let mut picks = Vec::new();
        for _ in 0..k {
            let mut top = g.top(bbox.expand(2));
            if top.is_empty() {
                top = g.top(state.board.as_polluted().map_or(bbox.expand(3), |pb| *pb.window()));
            }
            if top.is_empty() {
                break;
            }
            let e = top[self.rng.gen_range(0..top.len())];
            g.claim(e, true);
            picks.push(e);
            for v in e.endpoints() {
                bbox = bbox.include(v);
            }
        }
        g.maker_len += picks.len();
        g.last_move = picks.clone();
        picks
    }
}

impl Maker for GreedyMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        if state.variant == Variant::Unlimited {
            return self.unlimited_move(state);
        }
        greedy_edges(state, move_size(state), &mut self.rng)
    }
}

/// Greedy growth restricted to Maker's connected graph: in the box-limited
/// game it stretches the box with a connected tree instead of loose edges.
pub struct StretchMaker {
    rng: ChaCha8Rng,
    name: String,
}

impl StretchMaker {
    pub fn new(seed: u64) -> Self {
        StretchMaker { rng: ChaCha8Rng::seed_from_u64(seed), name: format!("stretch:{seed}") }
    }
}

impl Maker for StretchMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        greedy_from(state, move_size(state), &mut self.rng, true)
    }
}

/// Claims the first edges of a shortest free path from Maker's component of
/// the origin to a vertex a full move beyond everything claimed so far (the
/// window border on a polluted board). Ties between shortest paths go by `rng`.
pub struct RunnerMaker {
    rng: ChaCha8Rng,
    name: String,
}

impl RunnerMaker {
    pub fn new(seed: u64) -> Self {
        RunnerMaker { rng: ChaCha8Rng::seed_from_u64(seed), name: format!("runner:{seed}") }
    }

    fn escape_path(&mut self, state: &GameState, reach: i32) -> Vec<Edge> {
        let mut comp = BTreeSet::from([state.origin]);
        let mut queue = VecDeque::from([state.origin]);
        while let Some(u) = queue.pop_front() {
            for e in incident_array(u) {
                let w = e.other_end(u).unwrap();
                if state.maker().contains(&e) && comp.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        let window = state.board.as_polluted().map(|pb| *pb.window());
        let outside = {
            let mut b = state.maker_box();
            for e in state.breaker() {
                for v in e.endpoints() {
                    b = b.include(v);
                }
            }
            b.expand(reach)
        };
        let done = |v: Vertex| match window {
            Some(w) => w.on_border(v),
            None => !outside.contains(v),
        };
        let mut prev: HashMap<Vertex, Edge> = HashMap::new();
        let mut frontier: Vec<Vertex> = comp.iter().copied().collect();
        frontier.shuffle(&mut self.rng);
        let mut queue: VecDeque<Vertex> = frontier.into();
        let mut seen = comp.clone();
        while let Some(u) = queue.pop_front() {
            if done(u) {
                let mut path = Vec::new();
                let mut v = u;
                while let Some(&e) = prev.get(&v) {
                    path.push(e);
                    v = e.other_end(v).unwrap();
                }
                path.reverse();
                return path;
            }
            let mut next = incident_array(u);
            next.shuffle(&mut self.rng);
            for e in next {
                let w = e.other_end(u).unwrap();
                if state.is_free(e) && seen.insert(w) {
                    prev.insert(w, e);
                    queue.push_back(w);
                }
            }
        }
        Vec::new()
    }
}

impl Maker for RunnerMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        let k = move_size(state);
        let mut mv: Vec<Edge> = self.escape_path(state, k as i32).into_iter().take(k).collect();
        if mv.len() < k {
            let mut p = Pending::new(state);
            for &e in &mv {
                p.push(e);
            }
            while p.edges.len() < k {
                let cand = if state.variant == Variant::Unlimited { p.candidates() } else { p.frontier() };
                match cand.choose(&mut self.rng) {
                    Some(&e) => p.push(e),
                    None => break,
                }
            }
            mv = p.edges;
        }
        mv
    }
}

/// Plays `schedule[i]` edges in round `i + 1`, then the whole saved budget
/// every round once the schedule runs out.
pub struct BankingMaker {
    rng: ChaCha8Rng,
    schedule: Vec<u32>,
    name: String,
}

impl BankingMaker {
    pub fn new(seed: u64, schedule: Vec<u32>, bias: Bias) -> Result<Self, GameError> {
        let mut total = 0u64;
        for (i, &mi) in schedule.iter().enumerate() {
            total += u64::from(mi);
            let cap = (i as u64 + 1) * u64::from(bias.m) + u64::from(bias.c);
            if total > cap {
                return Err(GameError::InvalidBias(format!("banking schedule claims {total} edges by round {}, above the budget {cap}", i + 1)));
            }
        }
        let sched = schedule.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        Ok(BankingMaker { rng: ChaCha8Rng::seed_from_u64(seed), schedule, name: format!("banking:{seed}:{sched}") })
    }
}

impl Maker for BankingMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        let i = state.round() as usize;
        let k = match self.schedule.get(i) {
            Some(&mi) => (mi as usize).min(state.maker_budget_left()),
            None => state.maker_budget_left(),
        };
        greedy_edges(state, k, &mut self.rng)
    }
}

/// Runs an unlimited-game policy inside the box-limited or limited game.
/// Edges the inner policy plays that would break the variant's constraint are
/// kept in a bank, and each is claimed in the first round that starts with it
/// attached to Maker's graph.
pub struct WrappedMaker {
    inner: Box<dyn Maker>,
    bank: Vec<Edge>,
    name: String,
    /// Bank content after each of this policy's moves.
    history: Vec<Vec<Edge>>,
}

impl WrappedMaker {
    pub fn new(inner: Box<dyn Maker>) -> Self {
        let name = format!("wrapped:{}", inner.name());
        WrappedMaker { inner, bank: Vec::new(), name, history: Vec::new() }
    }

    pub fn bank(&self) -> &[Edge] {
        &self.bank
    }

    pub fn bank_history(&self) -> &[Vec<Edge>] {
        &self.history
    }

    fn fits(state: &GameState, set: &EdgeSet) -> bool {
        match state.variant {
            Variant::Limited => crate::game::connected_through(set, state.origin),
            Variant::BoxLimited => box_components_with(set, &[state.origin]).len() == 1,
            Variant::Unlimited => true,
        }
    }
}

impl Maker for WrappedMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        if state.variant == Variant::Unlimited {
            return self.inner.next_move(state);
        }
        self.bank.retain(|&e| state.is_free(e));
        let mut claimed = state.maker().clone();
        let mut out = Vec::new();
        // Bank edges attached at the start of the round, to a fixpoint.
        loop {
            let ready: Vec<Edge> = self
                .bank
                .iter()
                .copied()
                .filter(|&e| {
                    let mut t = claimed.clone();
                    t.insert(e);
                    Self::fits(state, &t)
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            for e in ready {
                let mut t = claimed.clone();
                t.insert(e);
                if Self::fits(state, &t) {
                    claimed.insert(e);
                    out.push(e);
                    self.bank.retain(|&b| b != e);
                }
            }
        }
        // The inner policy sees Maker's real edges plus the bank as its own.
        let mut shadow_maker = state.maker().clone();
        shadow_maker.extend(self.bank.iter().copied());
        shadow_maker.extend(out.iter().copied());
        let mut unlimited_bias = state.bias;
        unlimited_bias.s = 0;
        let shadow = GameState::with_claims(
            Variant::Unlimited,
            unlimited_bias,
            state.board.clone(),
            state.origin,
            shadow_maker,
            state.breaker().clone(),
            state.round(),
        );
        let fresh = match shadow {
            Ok(sh) if sh.is_ongoing() => self.inner.next_move(&sh),
            _ => Vec::new(),
        };
        let fresh: Vec<Edge> = fresh.into_iter().filter(|&e| state.is_free(e) && !claimed.contains(&e)).collect();
        for e in connected_order(&claimed, state.origin, &fresh) {
            let mut t = claimed.clone();
            t.insert(e);
            if out.len() < state.maker_budget_left() && Self::fits(state, &t) {
                claimed.insert(e);
                out.push(e);
            } else {
                self.bank.push(e);
            }
        }
        self.history.push(self.bank.clone());
        out
    }
}

/// Lattice `(1, b)` Maker that follows the survival search over a fixed horizon.
pub struct MinimaxMaker {
    rounds: u32,
    search: Option<SurvivalSearch>,
    fallback: RandomMaker,
    name: String,
}

impl MinimaxMaker {
    pub fn new(rounds: u32) -> Self {
        MinimaxMaker { rounds, search: None, fallback: RandomMaker::new(u64::from(rounds)), name: format!("minimax:{rounds}") }
    }
}

impl Maker for MinimaxMaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        let usable = state.bias.m == 1 && state.bias.c == 0 && state.variant == Variant::Unlimited;
        let left = self.rounds.saturating_sub(state.round());
        if usable && left > 0 {
            if self.search.is_none() {
                self.search = SurvivalSearch::new(state.bias.b, self.rounds, MakerModel::Free, 2_000_000).ok();
            }
            if let Some(s) = &self.search {
                if let Some(e) = s.best_move(state.maker(), state.breaker(), state.origin, left) {
                    if state.is_free(e) {
                        return vec![e];
                    }
                }
            }
        }
        self.fallback.next_move(state)
    }
}

/// Builds a policy from its command-line spec.
pub fn maker_from_spec(spec: &str, bias: Bias) -> Result<Box<dyn Maker>, GameError> {
    let bad = |why: &str| GameError::Precondition(format!("bad maker spec {spec:?}: {why}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected kind:parameters"))?;
    let seed = |s: &str| s.parse::<u64>().map_err(|_| bad("seed must be an unsigned integer"));
    match kind {
        "random" => Ok(Box::new(RandomMaker::new(seed(rest)?))),
        "greedy" => Ok(Box::new(GreedyMaker::new(seed(rest)?))),
        "stretch" => Ok(Box::new(StretchMaker::new(seed(rest)?))),
        "runner" => Ok(Box::new(RunnerMaker::new(seed(rest)?))),
        "banking" => {
            let (s, sched) = rest.split_once(':').ok_or_else(|| bad("expected banking:<seed>:<schedule>"))?;
            let schedule = sched
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad("schedule must be comma-separated counts")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Box::new(BankingMaker::new(seed(s)?, schedule, bias)?))
        }
        "wrapped" => Ok(Box::new(WrappedMaker::new(maker_from_spec(rest, bias)?))),
        "minimax" => {
            let r = rest.parse::<u32>().map_err(|_| bad("rounds must be an unsigned integer"))?;
            Ok(Box::new(MinimaxMaker::new(r)))
        }
        _ => Err(bad("unknown kind")),
    }
}
