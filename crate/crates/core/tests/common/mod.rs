//! Shared helpers for integration tests: deterministic RNG streams and
//! explicit construction of string-like and branching error operators.

#![allow(dead_code)]

use mobius_core::lattice::{CodeLattice, PauliXError, QubitClass, QubitId, Tri};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

type Center = (i32, i32);

fn add(c: Center, d: (i32, i32)) -> Center {
    (c.0 + d.0, c.1 + d.1)
}

const NEIGHBOR_OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// Same-color sublattice steps.
const SUBLATTICE_STEPS: [(i32, i32); 6] =
    [(1, 1), (-1, -1), (2, -1), (-2, 1), (1, -2), (-1, 2)];

fn common_neighbors(c: Center, d: Center) -> Vec<Center> {
    NEIGHBOR_OFFSETS
        .iter()
        .map(|&o| add(c, o))
        .filter(|&m| NEIGHBOR_OFFSETS.iter().any(|&o| add(d, o) == m))
        .collect()
}

/// The qubit triangle spanning three mutually adjacent centers, if present.
pub fn qubit_from_centers(lat: &CodeLattice, centers: [Center; 3]) -> Option<QubitId> {
    let amin = centers.iter().map(|c| c.0).min().unwrap();
    let bmin = centers.iter().map(|c| c.1).min().unwrap();
    for a in amin - 1..=amin + 1 {
        for b in bmin - 1..=bmin + 1 {
            for up in [true, false] {
                let tri = Tri { a, b, up };
                let mut cs = tri.centers();
                cs.sort_unstable();
                let mut want = centers;
                want.sort_unstable();
                if cs == want {
                    return lat.qubit_at(tri);
                }
            }
        }
    }
    None
}

/// The two qubits forming one same-color string segment between adjacent
/// sublattice centers.
pub fn segment_qubits(lat: &CodeLattice, c: Center, d: Center) -> Option<[QubitId; 2]> {
    let m = common_neighbors(c, d);
    if m.len() != 2 {
        return None;
    }
    let q1 = qubit_from_centers(lat, [c, m[0], m[1]])?;
    let q2 = qubit_from_centers(lat, [d, m[0], m[1]])?;
    Some([q1, q2])
}

/// For a boundary qubit, the bulk partner triangle obtained by reflecting the
/// off-lattice center across the shared edge, and the face center the pair
/// terminates on.
fn entry_pair(lat: &CodeLattice, q: QubitId) -> Option<(QubitId, Center)> {
    let tri = lat.triangle(q);
    let centers = tri.centers();
    let inside: Vec<Center> =
        centers.iter().copied().filter(|&c| lat.face_at(c).is_some()).collect();
    if inside.len() != 2 {
        return None;
    }
    let outside = centers.into_iter().find(|&c| lat.face_at(c).is_none())?;
    let partner = (inside[0].0 + inside[1].0 - outside.0, inside[0].1 + inside[1].1 - outside.1);
    let partner_q = qubit_from_centers(lat, [inside[0], inside[1], partner])?;
    Some((partner_q, partner))
}

/// A string operator of `color(start)` from the face at `start` to the
/// boundary of the same color, built over shortest sublattice steps.
///
/// Applied alone it creates exactly one defect, at `start`.
pub fn string_to_boundary(lat: &CodeLattice, start: Center) -> Option<PauliXError> {
    let color = lat.face_color(lat.face_at(start)?);
    // exits: centers reachable into the `color` boundary through a boundary
    // qubit plus its bulk partner
    let mut exits: HashMap<Center, (QubitId, QubitId)> = HashMap::new();
    for q in 0..lat.num_qubits() as QubitId {
        if lat.qubit_class(q) == QubitClass::Boundary(color) {
            if let Some((partner_q, partner)) = entry_pair(lat, q) {
                exits.entry(partner).or_insert((q, partner_q));
            }
        }
    }
    // BFS over the same-color sublattice
    let mut parent: HashMap<Center, Center> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, start);
    let mut goal = None;
    while let Some(c) = queue.pop_front() {
        if exits.contains_key(&c) {
            goal = Some(c);
            break;
        }
        for &step in &SUBLATTICE_STEPS {
            let n = add(c, step);
            if lat.face_at(n).is_none() || parent.contains_key(&n) {
                continue;
            }
            if segment_qubits(lat, c, n).is_none() {
                continue;
            }
            parent.insert(n, c);
            queue.push_back(n);
        }
    }
    let goal = goal?;
    let mut qubits: Vec<QubitId> = Vec::new();
    let (bq, pq) = exits[&goal];
    qubits.push(bq);
    qubits.push(pq);
    let mut c = goal;
    while c != start {
        let p = parent[&c];
        qubits.extend(segment_qubits(lat, p, c)?);
        c = p;
    }
    Some(PauliXError::new(qubits))
}

/// A branching ("tripod") instance: an error `e` stretching from the red
/// boundary whose far end creates one green and one blue defect, plus the
/// complementary strings `c_g`, `c_b` that close it into a logical operator.
pub struct Tripod {
    pub e: PauliXError,
    pub c_g: PauliXError,
    pub c_b: PauliXError,
    pub w: usize,
    pub w_g: usize,
    pub w_b: usize,
}

/// Builds the branching family member with `legs = (m_g, m_b)` extra green
/// and blue segments; the red leg takes the remainder so the three weights
/// sum to `d`.
pub fn tripod(lat: &CodeLattice, m_g: i32, m_b: i32) -> Option<Tripod> {
    let k = (lat.distance() as i32 - 1) / 2;
    let m_r = k - 3 - m_g - m_b;
    if m_r < 0 || m_g < 0 || m_b < 0 {
        return None;
    }
    // branch center fixed by the leg lengths (see the line coordinates)
    let b0 = m_b - m_g;
    let a0 = 2 * m_g + m_b + 3;
    let c0 = (a0, b0);
    lat.face_at(c0)?;
    // terminal triangle: the branch qubit whose green/blue corners start the
    // shorter legs
    let g_start = add(c0, (-1, 1));
    let b_start = add(c0, (-1, 0));
    let terminal = qubit_from_centers(lat, [c0, g_start, b_start])?;

    let red_leg = string_to_boundary(lat, c0)?;
    let e = red_leg.symmetric_difference(&PauliXError::new([terminal]));
    let c_g = string_to_boundary(lat, g_start)?;
    let c_b = string_to_boundary(lat, b_start)?;

    // sanity: e leaves exactly the green and blue defects at the branch
    let syn = lat.syndrome(&e);
    let expect: Vec<_> = [g_start, b_start]
        .iter()
        .map(|&c| lat.face_at(c).unwrap())
        .collect();
    let got: Vec<_> = syn.defects().iter().map(|&(f, _)| f).collect();
    let mut expect_sorted = expect.clone();
    expect_sorted.sort_unstable();
    if got != expect_sorted {
        return None;
    }
    let (w, w_g, w_b) = (e.weight(), c_g.weight(), c_b.weight());
    Some(Tripod { e, c_g, c_b, w, w_g, w_b })
}
