//! The unified matching graph: the three two-color restricted lattices glued
//! along their shared boundaries and corners into a single strip.
//!
//! Each face appears on the two panels that carry its color. Every qubit
//! induces unit edges whose weights sum to 3: a bulk qubit yields three
//! weight-1 edges, one per panel; a boundary qubit yields one weight-1 edge
//! plus a weight-2 edge across the crease of its boundary color; a corner
//! qubit yields a single weight-3 edge joining the two copies of its corner
//! face. Edges that cross the green readout line (the green crease and the
//! red/blue corner edges) carry a `crosses_green` flag.
//!
//! Distances are precomputed for all node pairs by Dijkstra minimizing
//! `(length, green crossings)` lexicographically, so the crossing parity of
//! a canonical shortest path is deterministic. A second table holds
//! distances on the torn graph with every green-crossing edge removed; the
//! alternative-correction subroutine works there.

use serde::Serialize;
use std::collections::{BinaryHeap, HashMap};

use crate::lattice::{CodeLattice, Color, FaceId, QubitClass, QubitId, Syndrome};
use crate::par;

pub type UNodeId = u32;

/// One of the three restricted lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    RG,
    GB,
    RB,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::RG, Panel::GB, Panel::RB];

    pub fn colors(self) -> (Color, Color) {
        match self {
            Panel::RG => (Color::R, Color::G),
            Panel::GB => (Color::G, Color::B),
            Panel::RB => (Color::R, Color::B),
        }
    }

    pub fn contains(self, c: Color) -> bool {
        let (a, b) = self.colors();
        a == c || b == c
    }

    /// The two panels carrying color `c`, in `Panel` order.
    pub fn carrying(c: Color) -> (Panel, Panel) {
        match c {
            Color::R => (Panel::RG, Panel::RB),
            Color::G => (Panel::RG, Panel::GB),
            Color::B => (Panel::GB, Panel::RB),
        }
    }

    /// The panel spanned by two distinct colors.
    pub fn of(a: Color, b: Color) -> Panel {
        match (a.min(b), a.max(b)) {
            (Color::R, Color::G) => Panel::RG,
            (Color::G, Color::B) => Panel::GB,
            (Color::R, Color::B) => Panel::RB,
            _ => panic!("panel of equal colors"),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Panel::RG => "rg",
            Panel::GB => "gb",
            Panel::RB => "rb",
        }
    }
}

/// A face copy on one panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UNode {
    pub face: FaceId,
    pub panel: Panel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Bulk,
    Crease(Color),
    Corner(Color),
}

#[derive(Clone, Debug)]
pub struct UnitEdge {
    pub endpoints: (UNodeId, UNodeId),
    pub weight: u32,
    pub crosses_green: bool,
    pub via: EdgeKind,
    pub source_qubits: Vec<QubitId>,
}

/// Shortest-path length and the green-crossing parity of the canonical path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathInfo {
    pub length: u32,
    pub green_parity: u8,
}

/// A cut unit edge, one of the `d` dummy-placement sites along the tear.
#[derive(Clone, Copy, Debug)]
pub struct TearSite {
    pub left: UNodeId,
    pub right: UNodeId,
    pub weight: u32,
}

#[derive(Clone, Debug)]
pub struct UnifiedLattice {
    nodes: Vec<UNode>,
    unit_edges: Vec<UnitEdge>,
    dist: Vec<PathInfo>,
    torn: Vec<u32>,
    tear_sites: Vec<TearSite>,
}

/// Builds the unified graph and its distance tables from a code lattice.
pub fn build_unified(lat: &CodeLattice) -> UnifiedLattice {
    let nf = lat.num_faces();
    let mut nodes = Vec::with_capacity(2 * nf);
    for f in 0..nf as FaceId {
        let (p0, p1) = Panel::carrying(lat.face_color(f));
        nodes.push(UNode { face: f, panel: p0 });
        nodes.push(UNode { face: f, panel: p1 });
    }
    let node_of = |face: FaceId, panel: Panel, lat: &CodeLattice| -> UNodeId {
        let (p0, p1) = Panel::carrying(lat.face_color(face));
        if panel == p0 {
            2 * face
        } else {
            assert_eq!(panel, p1, "face {face} does not appear on {panel:?}");
            2 * face + 1
        }
    };

    // merge per-qubit edges; bulk edges are induced by two qubits each
    let mut merged: HashMap<(UNodeId, UNodeId), (u32, bool, EdgeKind, Vec<QubitId>)> =
        HashMap::new();
    let mut add = |a: UNodeId, b: UNodeId, w: u32, flag: bool, via: EdgeKind, q: QubitId| {
        let key = (a.min(b), a.max(b));
        let entry = merged.entry(key).or_insert_with(|| (w, flag, via, Vec::new()));
        assert!(
            entry.0 == w && entry.1 == flag && entry.2 == via,
            "conflicting unit edges between {key:?}"
        );
        entry.3.push(q);
    };

    for q in 0..lat.num_qubits() as QubitId {
        let faces = lat.qubit_faces(q);
        match lat.qubit_class(q) {
            QubitClass::Bulk => {
                let mut by_color = [FaceId::MAX; 3];
                for &f in faces {
                    by_color[lat.face_color(f).index()] = f;
                }
                let [fr, fg, fb] = by_color;
                add(
                    node_of(fr, Panel::RG, lat),
                    node_of(fg, Panel::RG, lat),
                    1,
                    false,
                    EdgeKind::Bulk,
                    q,
                );
                add(
                    node_of(fg, Panel::GB, lat),
                    node_of(fb, Panel::GB, lat),
                    1,
                    false,
                    EdgeKind::Bulk,
                    q,
                );
                add(
                    node_of(fr, Panel::RB, lat),
                    node_of(fb, Panel::RB, lat),
                    1,
                    false,
                    EdgeKind::Bulk,
                    q,
                );
            }
            QubitClass::Boundary(u) => {
                let (fa, fb) = (faces[0], faces[1]);
                let (ca, cb) = (lat.face_color(fa), lat.face_color(fb));
                debug_assert!(ca != u && cb != u && ca != cb);
                // weight-1 edge on the panel avoiding u
                let pv = Panel::of(ca, cb);
                add(node_of(fa, pv, lat), node_of(fb, pv, lat), 1, false, EdgeKind::Bulk, q);
                // weight-2 edge across the u crease: one endpoint on each
                // u-carrying panel
                let (pu0, pu1) = Panel::carrying(u);
                let pa = if pu0.contains(ca) { pu0 } else { pu1 };
                let pb = if pa == pu0 { pu1 } else { pu0 };
                debug_assert!(pb.contains(cb));
                add(
                    node_of(fa, pa, lat),
                    node_of(fb, pb, lat),
                    2,
                    u == Color::G,
                    EdgeKind::Crease(u),
                    q,
                );
            }
            QubitClass::Corner(u) => {
                let f = faces[0];
                let (p0, p1) = Panel::carrying(u);
                add(
                    node_of(f, p0, lat),
                    node_of(f, p1, lat),
                    3,
                    u != Color::G,
                    EdgeKind::Corner(u),
                    q,
                );
            }
        }
    }

    let mut unit_edges: Vec<UnitEdge> = merged
        .into_iter()
        .map(|((a, b), (weight, crosses_green, via, mut source_qubits))| {
            source_qubits.sort_unstable();
            UnitEdge { endpoints: (a, b), weight, crosses_green, via, source_qubits }
        })
        .collect();
    unit_edges.sort_by_key(|e| e.endpoints);

    let mut adj = vec![Vec::new(); nodes.len()];
    for e in &unit_edges {
        let (a, b) = e.endpoints;
        adj[a as usize].push((b, e.weight, e.crosses_green));
        adj[b as usize].push((a, e.weight, e.crosses_green));
    }

    // tear sites ordered along the green boundary
    let tear_sites: Vec<TearSite> = lat
        .boundary(Color::G)
        .iter()
        .map(|&q| {
            let e = unit_edges
                .iter()
                .find(|e| e.crosses_green && e.source_qubits.contains(&q))
                .expect("green-boundary qubit without a green-crossing edge");
            TearSite { left: e.endpoints.0, right: e.endpoints.1, weight: e.weight }
        })
        .collect();

    let n = nodes.len();
    let dist_rows = par::map_collect((0..n).collect(), |s| dijkstra(&adj, s, false));
    let torn_rows = par::map_collect((0..n).collect(), |s| dijkstra(&adj, s, true));
    let mut dist = Vec::with_capacity(n * n);
    for row in dist_rows {
        dist.extend(row);
    }
    let mut torn = Vec::with_capacity(n * n);
    for row in torn_rows {
        torn.extend(row.into_iter().map(|p| p.length));
    }

    UnifiedLattice { nodes, unit_edges, dist, torn, tear_sites }
}

/// Single source shortest paths minimizing `(length, crossings)`.
fn dijkstra(adj: &[Vec<(UNodeId, u32, bool)>], source: usize, skip_green: bool) -> Vec<PathInfo> {
    let n = adj.len();
    let mut best = vec![(u32::MAX, u32::MAX); n];
    let mut heap = BinaryHeap::new();
    best[source] = (0, 0);
    heap.push(std::cmp::Reverse((0u32, 0u32, source as UNodeId)));
    while let Some(std::cmp::Reverse((len, cross, v))) = heap.pop() {
        if (len, cross) > best[v as usize] {
            continue;
        }
        for &(w, wt, flag) in &adj[v as usize] {
            if skip_green && flag {
                continue;
            }
            let cand = (len + wt, cross + flag as u32);
            if cand < best[w as usize] {
                best[w as usize] = cand;
                heap.push(std::cmp::Reverse((cand.0, cand.1, w)));
            }
        }
    }
    best.into_iter()
        .map(|(length, cross)| PathInfo {
            length,
            green_parity: if cross == u32::MAX { 0 } else { (cross % 2) as u8 },
        })
        .collect()
}

impl UnifiedLattice {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[UNode] {
        &self.nodes
    }

    pub fn node(&self, id: UNodeId) -> UNode {
        self.nodes[id as usize]
    }

    pub fn unit_edges(&self) -> &[UnitEdge] {
        &self.unit_edges
    }

    /// The two copies of a face, ordered by panel.
    pub fn copies(&self, f: FaceId) -> (UNodeId, UNodeId) {
        (2 * f, 2 * f + 1)
    }

    /// Canonical shortest-path length and green parity on the full graph.
    pub fn dist(&self, a: UNodeId, b: UNodeId) -> PathInfo {
        self.dist[a as usize * self.nodes.len() + b as usize]
    }

    /// Shortest-path length avoiding every green-crossing edge.
    pub fn torn_dist(&self, a: UNodeId, b: UNodeId) -> u32 {
        self.torn[a as usize * self.nodes.len() + b as usize]
    }

    /// Dummy-placement sites, in order along the green boundary.
    pub fn tear_sites(&self) -> &[TearSite] {
        &self.tear_sites
    }

    pub fn is_connected(&self) -> bool {
        (0..self.nodes.len() as UNodeId).all(|v| self.dist(0, v).length != u32::MAX)
    }

    /// The panel copies of every defect, two per defect.
    pub fn defect_nodes(&self, s: &Syndrome) -> Vec<UNodeId> {
        let mut out = Vec::with_capacity(2 * s.len());
        for &(f, _) in s.defects() {
            let (a, b) = self.copies(f);
            out.push(a);
            out.push(b);
        }
        out
    }

    pub fn dump(&self) -> UnifiedDump {
        UnifiedDump {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| NodeDump {
                    id: i as UNodeId,
                    face: n.face,
                    panel: n.panel.label().into(),
                })
                .collect(),
            unit_edges: self
                .unit_edges
                .iter()
                .map(|e| EdgeDump {
                    a: e.endpoints.0,
                    b: e.endpoints.1,
                    weight: e.weight,
                    via: match e.via {
                        EdgeKind::Bulk => "bulk".into(),
                        EdgeKind::Crease(c) => format!("crease_{}", c.label()),
                        EdgeKind::Corner(c) => format!("corner_{}", c.label()),
                    },
                    crosses_green: e.crosses_green,
                    source_qubits: e.source_qubits.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct UnifiedDump {
    pub nodes: Vec<NodeDump>,
    pub unit_edges: Vec<EdgeDump>,
}

#[derive(Serialize)]
pub struct NodeDump {
    pub id: UNodeId,
    pub face: FaceId,
    pub panel: String,
}

#[derive(Serialize)]
pub struct EdgeDump {
    pub a: UNodeId,
    pub b: UNodeId,
    pub weight: u32,
    pub via: String,
    pub crosses_green: bool,
    pub source_qubits: Vec<QubitId>,
}
