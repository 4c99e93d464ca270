//! Decoding on the unified lattice.
//!
//! [`decode_moebius`] pairs all defect copies with one minimum-weight perfect
//! matching and reads the logical class off the green-crossing parity of the
//! matched edges. [`alternative_matching`] reruns matching on the torn graph
//! with a pair of dummy nodes straddling one cut edge, which forces a
//! correction in the opposite logical class. [`decode_comparative`] switches
//! to the alternative exactly when its total length exceeds the original by
//! `upsilon` and the original length fails the physicality parity check
//! `(2*ell - d) mod 4 = 1`.

use crate::lattice::{CodeLattice, Color, PauliXError, Syndrome};
use crate::matching::{mwpm, MatchGraph};
use crate::unified::{UNodeId, UnifiedLattice};
use crate::{par, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Original,
    Alternative,
}

/// One matched pair of defect copies, with the length and green-crossing
/// parity of the route it is charged for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchedEdge {
    pub nodes: (UNodeId, UNodeId),
    pub length: u32,
    pub green_parity: u8,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    /// Predicted commutator with the green boundary logical.
    pub predicted_parity: u8,
    /// Total edge length of the chosen matching.
    pub ell: u32,
    pub edges: Vec<MatchedEdge>,
    pub variant: Variant,
    pub ell_or: u32,
    pub ell_alt: Option<u32>,
}

/// Which dummy-placement sites along the tear to try.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum DummyPlacements {
    #[default]
    All,
    Subset(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparativeConfig {
    pub upsilon: u32,
    pub enabled: bool,
    pub tear_crease: Color,
    pub dummy_placements: DummyPlacements,
}

impl Default for ComparativeConfig {
    fn default() -> Self {
        ComparativeConfig {
            upsilon: 1,
            enabled: true,
            tear_crease: Color::G,
            dummy_placements: DummyPlacements::All,
        }
    }
}

impl ComparativeConfig {
    pub fn with_upsilon(upsilon: u32) -> Result<Self> {
        if upsilon == 0 {
            return Err(Error::InvalidUpsilon(upsilon));
        }
        Ok(ComparativeConfig { upsilon, ..Default::default() })
    }

    fn validate(&self) -> Result<()> {
        if self.upsilon == 0 {
            return Err(Error::InvalidUpsilon(self.upsilon));
        }
        if self.tear_crease != Color::G {
            return Err(Error::UnsupportedTear(self.tear_crease));
        }
        Ok(())
    }
}

/// Decoder selection for the simulation harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Moebius,
    Comparative(ComparativeConfig),
}

impl DecoderKind {
    pub fn label(&self) -> &'static str {
        match self {
            DecoderKind::Moebius => "moebius",
            DecoderKind::Comparative(_) => "comparative",
        }
    }
}

/// Single matching over all defect copies on the unified lattice.
pub fn decode_moebius(uni: &UnifiedLattice, s: &Syndrome) -> DecodeResult {
    let nodes = uni.defect_nodes(s);
    if nodes.is_empty() {
        return DecodeResult {
            predicted_parity: 0,
            ell: 0,
            edges: Vec::new(),
            variant: Variant::Original,
            ell_or: 0,
            ell_alt: None,
        };
    }
    let mut g = MatchGraph::new(nodes.len());
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            g.set(i, j, uni.dist(nodes[i], nodes[j]).length as i64);
        }
    }
    let matching = mwpm(&g).expect("complete graph with even nodes is always matchable");
    let mut edges = Vec::with_capacity(nodes.len() / 2);
    let mut ell = 0u32;
    let mut parity = 0u8;
    for &(i, j) in matching.pairs() {
        let p = uni.dist(nodes[i], nodes[j]);
        edges.push(MatchedEdge {
            nodes: (nodes[i], nodes[j]),
            length: p.length,
            green_parity: p.green_parity,
        });
        ell += p.length;
        parity ^= p.green_parity;
    }
    DecodeResult {
        predicted_parity: parity,
        ell,
        edges,
        variant: Variant::Original,
        ell_or: ell,
        ell_alt: None,
    }
}

/// The logically inequivalent correction found on the torn manifold, if any.
#[derive(Clone, Debug)]
pub struct AlternativeOutcome {
    pub ell_alt: u32,
    pub parity_alt: u8,
    pub edges: Vec<MatchedEdge>,
    /// Index of the winning dummy placement along the tear.
    pub site: usize,
}

/// Finds an alternative correction by matching on the torn graph with one
/// pair of dummy nodes per tear site and keeping the cheapest placement.
///
/// Returns `None` when there is nothing to re-pair (empty syndrome, or every
/// defect copy was consumed by tear-crossing pairs and no third-party nodes
/// remain).
pub fn alternative_matching(
    uni: &UnifiedLattice,
    s: &Syndrome,
    orig: &DecodeResult,
) -> Option<AlternativeOutcome> {
    alternative_matching_at(uni, s, orig, &DummyPlacements::All)
}

pub fn alternative_matching_at(
    uni: &UnifiedLattice,
    s: &Syndrome,
    orig: &DecodeResult,
    placements: &DummyPlacements,
) -> Option<AlternativeOutcome> {
    let nodes = uni.defect_nodes(s);
    if nodes.is_empty() {
        return None;
    }
    // pairs whose canonical path crossed the readout line come off the graph
    let removed: Vec<(UNodeId, UNodeId)> =
        orig.edges.iter().filter(|e| e.green_parity == 1).map(|e| e.nodes).collect();
    let mut remaining = nodes.clone();
    remaining.retain(|&n| !removed.iter().any(|&(l, r)| l == n || r == n));
    if remaining.is_empty() {
        return None;
    }
    debug_assert_eq!(remaining.len() % 2, 0);

    let sites: Vec<(usize, crate::unified::TearSite)> = match placements {
        DummyPlacements::All => uni.tear_sites().iter().copied().enumerate().collect(),
        DummyPlacements::Subset(idx) => idx
            .iter()
            .filter_map(|&i| uni.tear_sites().get(i).map(|&s| (i, s)))
            .collect(),
    };
    if sites.is_empty() {
        return None;
    }

    let m = remaining.len();
    let placed = par::map_collect(sites, |(site_idx, site)| {
        let mut g = MatchGraph::new(m + 2);
        for i in 0..m {
            for j in i + 1..m {
                g.set(i, j, uni.torn_dist(remaining[i], remaining[j]) as i64);
            }
            g.set(i, m, uni.torn_dist(remaining[i], site.left) as i64);
            g.set(i, m + 1, uni.torn_dist(remaining[i], site.right) as i64);
        }
        // the two dummies may not pair with each other
        let matching = mwpm(&g).expect("feasible placement graph");
        let cost = matching.cost(&g) + site.weight as i64;
        (cost, site_idx, site, matching)
    });
    let (_, site_idx, site, matching) = placed
        .into_iter()
        .min_by_key(|&(cost, site_idx, _, _)| (cost, site_idx))
        .expect("at least one placement");

    // split the winning matching into the dummy-bridged pair and the rest
    let mut u_left = None;
    let mut u_right = None;
    let mut kept: Vec<(UNodeId, UNodeId)> = Vec::new();
    for &(i, j) in matching.pairs() {
        match (i >= m, j >= m) {
            (false, false) => kept.push((remaining[i], remaining[j])),
            (false, true) | (true, false) => {
                let (defect, dummy) = if i >= m { (j, i) } else { (i, j) };
                if dummy == m {
                    u_left = Some(remaining[defect]);
                } else {
                    u_right = Some(remaining[defect]);
                }
            }
            (true, true) => unreachable!("dummy-dummy pairing is forbidden"),
        }
    }
    let (u_l, u_r) = (u_left.expect("left dummy matched"), u_right.expect("right dummy matched"));

    let mut edges: Vec<MatchedEdge> = kept
        .into_iter()
        .map(|(a, b)| MatchedEdge {
            nodes: (a, b),
            length: uni.dist(a, b).length,
            green_parity: 0,
        })
        .collect();

    // the bridged pair crosses the tear exactly once, through the cut edge
    let bridge = MatchedEdge {
        nodes: (u_l, u_r),
        length: uni.torn_dist(u_l, site.left) + site.weight + uni.torn_dist(site.right, u_r),
        green_parity: 1,
    };

    // lambda reduction: try to reroute the bridge through one removed pair
    let mut best_rewire: Option<(u32, usize, bool)> = None;
    for (j, &(l, r)) in removed.iter().enumerate() {
        for swap in [false, true] {
            let (lj, rj) = if swap { (r, l) } else { (l, r) };
            // both reconnections must stay in the original class
            if uni.dist(u_l, lj).green_parity != 0 || uni.dist(u_r, rj).green_parity != 0 {
                continue;
            }
            let lambda = uni.dist(u_l, lj).length + uni.dist(u_r, rj).length;
            if best_rewire.map_or(true, |(best, _, _)| lambda < best) {
                best_rewire = Some((lambda, j, swap));
            }
        }
    }
    let mut rewired_at = None;
    if let Some((lambda, j, swap)) = best_rewire {
        let (l, r) = removed[j];
        let keep_cost = bridge.length + uni.dist(l, r).length;
        if lambda < keep_cost {
            let (lj, rj) = if swap { (r, l) } else { (l, r) };
            edges.push(MatchedEdge {
                nodes: (u_l, lj),
                length: uni.dist(u_l, lj).length,
                green_parity: uni.dist(u_l, lj).green_parity,
            });
            edges.push(MatchedEdge {
                nodes: (u_r, rj),
                length: uni.dist(u_r, rj).length,
                green_parity: uni.dist(u_r, rj).green_parity,
            });
            rewired_at = Some(j);
        }
    }
    if rewired_at.is_none() {
        edges.push(bridge);
    }
    // re-add the removed tear-crossing pairs that were not rewired
    for (j, &(l, r)) in removed.iter().enumerate() {
        if rewired_at == Some(j) {
            continue;
        }
        let p = uni.dist(l, r);
        edges.push(MatchedEdge { nodes: (l, r), length: p.length, green_parity: p.green_parity });
    }

    let ell_alt = edges.iter().map(|e| e.length).sum();
    let parity_alt = edges.iter().fold(0u8, |acc, e| acc ^ e.green_parity);
    Some(AlternativeOutcome { ell_alt, parity_alt, edges, site: site_idx })
}

/// Möbius decoding followed by the comparative switching rule.
pub fn decode_comparative(
    uni: &UnifiedLattice,
    s: &Syndrome,
    cfg: &ComparativeConfig,
    d: u32,
) -> Result<DecodeResult> {
    cfg.validate()?;
    let orig = decode_moebius(uni, s);
    if !cfg.enabled {
        return Ok(orig);
    }
    let Some(alt) = alternative_matching_at(uni, s, &orig, &cfg.dummy_placements) else {
        return Ok(orig);
    };
    let cond_gap = alt.ell_alt as i64 - orig.ell_or as i64 == cfg.upsilon as i64;
    let cond_parity = (2 * orig.ell_or as i64 - d as i64).rem_euclid(4) == 1;
    if cond_gap && cond_parity {
        Ok(DecodeResult {
            predicted_parity: alt.parity_alt,
            ell: alt.ell_alt,
            edges: alt.edges,
            variant: Variant::Alternative,
            ell_or: orig.ell_or,
            ell_alt: Some(alt.ell_alt),
        })
    } else {
        Ok(DecodeResult { ell_alt: Some(alt.ell_alt), ..orig })
    }
}

/// Whether the chosen decoder corrects the given error.
pub fn decode_success(
    lat: &CodeLattice,
    uni: &UnifiedLattice,
    e: &PauliXError,
    kind: &DecoderKind,
) -> bool {
    let syn = lat.syndrome(e);
    let result = decode(lat, uni, &syn, kind);
    result.predicted_parity == lat.logical_parity(e, Color::G)
}

/// Runs the selected decoder on a syndrome.
pub fn decode(
    lat: &CodeLattice,
    uni: &UnifiedLattice,
    syn: &Syndrome,
    kind: &DecoderKind,
) -> DecodeResult {
    match kind {
        DecoderKind::Moebius => decode_moebius(uni, syn),
        DecoderKind::Comparative(cfg) => decode_comparative(uni, syn, cfg, lat.distance())
            .expect("comparative config validated by caller"),
    }
}
