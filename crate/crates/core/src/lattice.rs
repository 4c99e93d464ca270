//! The triangular color code on the hexagonal lattice.
//!
//! Construction works on the dual picture: stabilizer faces are vertices of a
//! triangular lattice with axial coordinates `(a, b)`, three-colored by
//! `(a - b) mod 3`, and every qubit is one of the small up/down triangles.
//! The code patch is cut by three lines, one per color, each running through
//! a single-color row of centers:
//!
//! * `a - b  = -2`   (green line; its side is the green boundary)
//! * `a + 2b = -1`   (blue line)
//! * `2a + b = 3k`   (red line), with `k = (d - 1) / 2`.
//!
//! Faces are the centers strictly inside all three lines; qubits are the
//! triangles whose three centers stay inside or on the lines. A triangle with
//! 3, 2 or 1 interior centers is a bulk, boundary or corner qubit. All
//! structure (counts, classes, boundary operators) is validated by tests
//! against the closed forms rather than any particular drawing.

use serde::Serialize;
use std::collections::HashMap;

use crate::{Error, Result};

pub type QubitId = u32;
pub type FaceId = u32;

/// Face and boundary colors, ordered `R < G < B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::G => 1,
            Color::B => 2,
        }
    }

    fn from_residue(r: i32) -> Color {
        match r.rem_euclid(3) {
            0 => Color::R,
            1 => Color::G,
            _ => Color::B,
        }
    }

    /// The other two colors, in order.
    pub fn others(self) -> (Color, Color) {
        match self {
            Color::R => (Color::G, Color::B),
            Color::G => (Color::R, Color::B),
            Color::B => (Color::R, Color::G),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Color::R => "r",
            Color::G => "g",
            Color::B => "b",
        }
    }
}

/// A triangle of the dual lattice: `up` spans centers
/// `(a,b), (a+1,b), (a,b+1)`, otherwise `(a+1,b), (a,b+1), (a+1,b+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tri {
    pub a: i32,
    pub b: i32,
    pub up: bool,
}

impl Tri {
    pub fn centers(self) -> [(i32, i32); 3] {
        let Tri { a, b, up } = self;
        if up {
            [(a, b), (a + 1, b), (a, b + 1)]
        } else {
            [(a + 1, b), (a, b + 1), (a + 1, b + 1)]
        }
    }

    /// Integer centroid in thirds of a lattice step; doubles as the
    /// row-major sort key `(y, x)`.
    fn coord(self) -> (i32, i32) {
        if self.up {
            (3 * self.a + 1, 3 * self.b + 1)
        } else {
            (3 * self.a + 2, 3 * self.b + 2)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitClass {
    Bulk,
    Boundary(Color),
    Corner(Color),
}

impl QubitClass {
    pub fn label(self) -> String {
        match self {
            QubitClass::Bulk => "bulk".into(),
            QubitClass::Boundary(c) => format!("boundary_{}", c.label()),
            QubitClass::Corner(c) => format!("corner_{}", c.label()),
        }
    }
}

/// A set of bit-flipped qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PauliXError {
    support: Vec<QubitId>,
}

impl PauliXError {
    pub fn new(support: impl IntoIterator<Item = QubitId>) -> Self {
        let mut support: Vec<QubitId> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        PauliXError { support }
    }

    pub fn empty() -> Self {
        PauliXError::default()
    }

    pub fn support(&self) -> &[QubitId] {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.support.binary_search(&q).is_ok()
    }

    /// Product of the two Pauli operators (XOR of supports).
    pub fn symmetric_difference(&self, other: &PauliXError) -> PauliXError {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() || j < other.support.len() {
            match (self.support.get(i), other.support.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    out.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        PauliXError { support: out }
    }
}

/// Violated faces, each tagged with its color.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Syndrome {
    defects: Vec<(FaceId, Color)>,
}

impl Syndrome {
    pub fn defects(&self) -> &[(FaceId, Color)] {
        &self.defects
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }
}

#[derive(Clone, Debug)]
pub struct QubitInfo {
    pub tri: Tri,
    pub class: QubitClass,
    /// `(x, y)` centroid in thirds of a lattice step.
    pub coord: (i32, i32),
}

#[derive(Clone, Debug)]
pub struct FaceInfo {
    pub center: (i32, i32),
    pub color: Color,
    pub support: Vec<QubitId>,
}

/// The distance-`d` triangular color code.
#[derive(Clone, Debug)]
pub struct CodeLattice {
    d: u32,
    qubits: Vec<QubitInfo>,
    faces: Vec<FaceInfo>,
    qubit_faces: Vec<Vec<FaceId>>,
    boundary: [Vec<QubitId>; 3],
    corner: [QubitId; 3],
    tri_index: HashMap<Tri, QubitId>,
    face_index: HashMap<(i32, i32), FaceId>,
    in_boundary: [Vec<bool>; 3],
}

fn line_values(a: i32, b: i32) -> (i32, i32, i32) {
    (a - b, 2 * a + b, a + 2 * b)
}

/// Builds the lattice for any odd `d >= 3`.
pub fn build_lattice(d: u32) -> Result<CodeLattice> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidDistance(d));
    }
    let k = (d as i32 - 1) / 2;
    let interior = |a: i32, b: i32| {
        let (f1, f2, f3) = line_values(a, b);
        f1 >= -1 && f3 >= 0 && f2 <= 3 * k - 1
    };
    let closed = |a: i32, b: i32| {
        let (f1, f2, f3) = line_values(a, b);
        f1 >= -2 && f3 >= -1 && f2 <= 3 * k
    };

    // collect qubit triangles over a window that safely covers the patch
    let mut tris: Vec<(Tri, QubitClass)> = Vec::new();
    for b in -(k + 2)..=(k + 2) {
        for a in -(k + 3)..=(3 * k + 3) / 2 + 2 {
            for up in [true, false] {
                let tri = Tri { a, b, up };
                if !tri.centers().iter().all(|&(ca, cb)| closed(ca, cb)) {
                    continue;
                }
                let inner: Vec<(i32, i32)> = tri
                    .centers()
                    .iter()
                    .copied()
                    .filter(|&(ca, cb)| interior(ca, cb))
                    .collect();
                let class = match inner.len() {
                    3 => QubitClass::Bulk,
                    2 => {
                        let (la, lb) = tri
                            .centers()
                            .into_iter()
                            .find(|&(ca, cb)| !interior(ca, cb))
                            .unwrap();
                        QubitClass::Boundary(Color::from_residue(la - lb))
                    }
                    1 => QubitClass::Corner(Color::from_residue(inner[0].0 - inner[0].1)),
                    _ => unreachable!("triangle with no adjacent face at d={d}"),
                };
                tris.push((tri, class));
            }
        }
    }
    tris.sort_by_key(|(tri, _)| {
        let (x, y) = tri.coord();
        (y, x)
    });

    let qubits: Vec<QubitInfo> = tris
        .iter()
        .map(|&(tri, class)| {
            let (x, y) = tri.coord();
            QubitInfo { tri, class, coord: (x, y) }
        })
        .collect();
    let tri_index: HashMap<Tri, QubitId> =
        qubits.iter().enumerate().map(|(i, q)| (q.tri, i as QubitId)).collect();

    // faces: interior centers ordered by (color, b, a)
    let mut centers: Vec<((i32, i32), Color)> = Vec::new();
    for b in -(k + 2)..=(k + 2) {
        for a in -(k + 3)..=(3 * k + 3) / 2 + 2 {
            if interior(a, b) {
                centers.push(((a, b), Color::from_residue(a - b)));
            }
        }
    }
    centers.sort_by_key(|&((a, b), color)| (color, b, a));
    let face_index: HashMap<(i32, i32), FaceId> =
        centers.iter().enumerate().map(|(i, &(c, _))| (c, i as FaceId)).collect();

    let mut faces: Vec<FaceInfo> = centers
        .iter()
        .map(|&(center, color)| FaceInfo { center, color, support: Vec::new() })
        .collect();
    let mut qubit_faces: Vec<Vec<FaceId>> = vec![Vec::new(); qubits.len()];
    for (q, info) in qubits.iter().enumerate() {
        for (ca, cb) in info.tri.centers() {
            if let Some(&f) = face_index.get(&(ca, cb)) {
                faces[f as usize].support.push(q as QubitId);
                qubit_faces[q].push(f);
            }
        }
        qubit_faces[q].sort_unstable();
    }
    for f in &mut faces {
        f.support.sort_unstable();
    }

    let mut corner = [QubitId::MAX; 3];
    for (q, info) in qubits.iter().enumerate() {
        if let QubitClass::Corner(c) = info.class {
            assert_eq!(corner[c.index()], QubitId::MAX, "duplicate {c:?} corner");
            corner[c.index()] = q as QubitId;
        }
    }
    assert!(corner.iter().all(|&q| q != QubitId::MAX), "missing corner qubit");

    let mut boundary: [Vec<QubitId>; 3] = Default::default();
    for c in Color::ALL {
        let (v, w) = c.others();
        let mut list: Vec<QubitId> = qubits
            .iter()
            .enumerate()
            .filter(|(_, info)| {
                info.class == QubitClass::Boundary(c)
                    || info.class == QubitClass::Corner(v)
                    || info.class == QubitClass::Corner(w)
            })
            .map(|(q, _)| q as QubitId)
            .collect();
        list.sort_by_key(|&q| {
            let (x, y) = qubits[q as usize].coord;
            (y, x)
        });
        boundary[c.index()] = list;
    }

    let in_boundary = [0, 1, 2].map(|ci| {
        let mut flags = vec![false; qubits.len()];
        for &q in &boundary[ci] {
            flags[q as usize] = true;
        }
        flags
    });

    Ok(CodeLattice {
        d,
        qubits,
        faces,
        qubit_faces,
        boundary,
        corner,
        tri_index,
        face_index,
        in_boundary,
    })
}

impl CodeLattice {
    pub fn distance(&self) -> u32 {
        self.d
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn qubits(&self) -> &[QubitInfo] {
        &self.qubits
    }

    pub fn faces(&self) -> &[FaceInfo] {
        &self.faces
    }

    pub fn qubit_class(&self, q: QubitId) -> QubitClass {
        self.qubits[q as usize].class
    }

    pub fn qubit_faces(&self, q: QubitId) -> &[FaceId] {
        &self.qubit_faces[q as usize]
    }

    pub fn face_color(&self, f: FaceId) -> Color {
        self.faces[f as usize].color
    }

    pub fn face_support(&self, f: FaceId) -> &[QubitId] {
        &self.faces[f as usize].support
    }

    /// The `d` qubits of the `c`-colored boundary, endpoints included.
    pub fn boundary(&self, c: Color) -> &[QubitId] {
        &self.boundary[c.index()]
    }

    pub fn corner(&self, c: Color) -> QubitId {
        self.corner[c.index()]
    }

    pub fn qubit_at(&self, tri: Tri) -> Option<QubitId> {
        self.tri_index.get(&tri).copied()
    }

    pub fn triangle(&self, q: QubitId) -> Tri {
        self.qubits[q as usize].tri
    }

    pub fn face_at(&self, center: (i32, i32)) -> Option<FaceId> {
        self.face_index.get(&center).copied()
    }

    pub fn face_center(&self, f: FaceId) -> (i32, i32) {
        self.faces[f as usize].center
    }

    /// Faces whose stabilizer anticommutes with the error.
    pub fn syndrome(&self, e: &PauliXError) -> Syndrome {
        let mut parity = vec![false; self.faces.len()];
        for &q in e.support() {
            for &f in &self.qubit_faces[q as usize] {
                parity[f as usize] = !parity[f as usize];
            }
        }
        let defects = parity
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p)
            .map(|(f, _)| (f as FaceId, self.faces[f].color))
            .collect();
        Syndrome { defects }
    }

    /// Support of the product of all stabilizers not colored `u`.
    pub fn boundary_operator(&self, u: Color) -> Vec<QubitId> {
        let mut parity = vec![false; self.qubits.len()];
        for f in &self.faces {
            if f.color != u {
                for &q in &f.support {
                    parity[q as usize] = !parity[q as usize];
                }
            }
        }
        parity
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p)
            .map(|(q, _)| q as QubitId)
            .collect()
    }

    /// Support of the boundary logical of color `u`.
    pub fn logical_support(&self, u: Color) -> &[QubitId] {
        &self.boundary[u.index()]
    }

    /// Commutator of the error with the `u`-boundary logical.
    pub fn logical_parity(&self, e: &PauliXError, u: Color) -> u8 {
        let flags = &self.in_boundary[u.index()];
        let odd = e.support().iter().filter(|&&q| flags[q as usize]).count() % 2;
        odd as u8
    }

    pub fn dump(&self) -> LatticeDump {
        LatticeDump {
            d: self.d,
            qubits: self
                .qubits
                .iter()
                .enumerate()
                .map(|(i, q)| QubitDump {
                    id: i as QubitId,
                    class: q.class.label(),
                    coord: [q.coord.0, q.coord.1],
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .enumerate()
                .map(|(i, f)| FaceDump {
                    id: i as FaceId,
                    color: f.color.label().into(),
                    support: f.support.clone(),
                })
                .collect(),
            boundaries: PerColor {
                r: self.boundary[0].clone(),
                g: self.boundary[1].clone(),
                b: self.boundary[2].clone(),
            },
            corners: PerColorScalar {
                r: self.corner[0],
                g: self.corner[1],
                b: self.corner[2],
            },
        }
    }
}

#[derive(Serialize)]
pub struct LatticeDump {
    pub d: u32,
    pub qubits: Vec<QubitDump>,
    pub faces: Vec<FaceDump>,
    pub boundaries: PerColor,
    pub corners: PerColorScalar,
}

#[derive(Serialize)]
pub struct QubitDump {
    pub id: QubitId,
    pub class: String,
    pub coord: [i32; 2],
}

#[derive(Serialize)]
pub struct FaceDump {
    pub id: FaceId,
    pub color: String,
    pub support: Vec<QubitId>,
}

#[derive(Serialize)]
pub struct PerColor {
    pub r: Vec<QubitId>,
    pub g: Vec<QubitId>,
    pub b: Vec<QubitId>,
}

#[derive(Serialize)]
pub struct PerColorScalar {
    pub r: QubitId,
    pub g: QubitId,
    pub b: QubitId,
}

/// Closed form for the qubit count: `3(d-1)(d+1)/4 + 1`.
pub fn expected_qubits(d: u32) -> usize {
    (3 * (d as usize - 1) * (d as usize + 1)) / 4 + 1
}

/// Closed form for the face count: `(n - 1) / 2`.
pub fn expected_faces(d: u32) -> usize {
    (expected_qubits(d) - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_distances() {
        assert!(matches!(build_lattice(2), Err(Error::InvalidDistance(2))));
        assert!(matches!(build_lattice(4), Err(Error::InvalidDistance(4))));
        assert!(matches!(build_lattice(1), Err(Error::InvalidDistance(1))));
    }

    #[test]
    fn counts_match_closed_forms() {
        for (d, q, f) in [(3, 7, 3), (5, 19, 9), (13, 127, 63)] {
            let lat = build_lattice(d).unwrap();
            assert_eq!(lat.num_qubits(), q, "qubits at d={d}");
            assert_eq!(lat.num_faces(), f, "faces at d={d}");
            assert_eq!(lat.num_qubits(), expected_qubits(d));
            assert_eq!(lat.num_faces(), expected_faces(d));
        }
    }

    #[test]
    fn steane_structure_at_d3() {
        let lat = build_lattice(3).unwrap();
        // one face per color, each of weight 4, pairwise sharing two qubits
        for f in 0..3 {
            assert_eq!(lat.face_support(f).len(), 4);
        }
        for i in 0..3u32 {
            for j in i + 1..3 {
                let si = lat.face_support(i);
                let overlap = lat.face_support(j).iter().filter(|q| si.contains(q)).count();
                assert_eq!(overlap, 2);
            }
        }
        // exactly one bulk qubit touching all three faces
        let bulk: Vec<_> = (0..7)
            .filter(|&q| lat.qubit_class(q) == QubitClass::Bulk)
            .collect();
        assert_eq!(bulk.len(), 1);
        assert_eq!(lat.qubit_faces(bulk[0]).len(), 3);
    }

    #[test]
    fn syndrome_of_single_flips() {
        let lat = build_lattice(5).unwrap();
        for q in 0..lat.num_qubits() as QubitId {
            let syn = lat.syndrome(&PauliXError::new([q]));
            match lat.qubit_class(q) {
                QubitClass::Bulk => {
                    assert_eq!(syn.len(), 3);
                    let mut colors: Vec<Color> = syn.defects().iter().map(|d| d.1).collect();
                    colors.sort();
                    colors.dedup();
                    assert_eq!(colors.len(), 3);
                }
                QubitClass::Boundary(c) => {
                    assert_eq!(syn.len(), 2);
                    assert!(syn.defects().iter().all(|d| d.1 != c));
                }
                QubitClass::Corner(c) => {
                    assert_eq!(syn.len(), 1);
                    assert_eq!(syn.defects()[0].1, c);
                }
            }
        }
        assert!(lat.syndrome(&PauliXError::empty()).is_empty());
    }

    #[test]
    fn boundary_operator_identities() {
        for d in [3, 5, 7] {
            let lat = build_lattice(d).unwrap();
            for u in Color::ALL {
                let (v, w) = u.others();
                let bu = PauliXError::new(lat.boundary_operator(u));
                let zv = PauliXError::new(lat.logical_support(v).iter().copied());
                let zw = PauliXError::new(lat.logical_support(w).iter().copied());
                assert_eq!(bu, zv.symmetric_difference(&zw), "b_{u:?} at d={d}");
            }
            let br = PauliXError::new(lat.boundary_operator(Color::R));
            let bg = PauliXError::new(lat.boundary_operator(Color::G));
            let bb = PauliXError::new(lat.boundary_operator(Color::B));
            let triple = br.symmetric_difference(&bg).symmetric_difference(&bb);
            assert_eq!(triple.weight(), 0, "b_r b_g b_b != identity at d={d}");
        }
        let lat = build_lattice(3).unwrap();
        for u in Color::ALL {
            assert_eq!(lat.boundary_operator(u).len() % 2, 0);
            assert_eq!(lat.boundary_operator(u).len(), 4);
        }
    }

    #[test]
    fn logical_supports() {
        let lat = build_lattice(3).unwrap();
        let green = lat.logical_support(Color::G);
        assert_eq!(green.len(), 3);
        assert!(green.contains(&lat.corner(Color::R)));
        assert!(green.contains(&lat.corner(Color::B)));
        for d in [3, 5, 9] {
            let lat = build_lattice(d).unwrap();
            for u in Color::ALL {
                assert_eq!(lat.logical_support(u).len(), d as usize);
                let (v, w) = u.others();
                let su = lat.logical_support(u);
                let inter: Vec<_> =
                    lat.logical_support(v).iter().filter(|q| su.contains(q)).collect();
                assert_eq!(inter.len(), 1);
                assert_eq!(*inter[0], lat.corner(w));
            }
            let mut union: Vec<QubitId> = Color::ALL
                .iter()
                .flat_map(|&u| lat.logical_support(u).iter().copied())
                .collect();
            union.sort_unstable();
            union.dedup();
            assert_eq!(union.len(), 3 * d as usize - 3);
        }
    }

    #[test]
    fn logical_parity_basics() {
        let lat = build_lattice(5).unwrap();
        // a non-corner green-boundary qubit anticommutes with the green logical
        let q = *lat
            .boundary(Color::G)
            .iter()
            .find(|&&q| lat.qubit_class(q) == QubitClass::Boundary(Color::G))
            .unwrap();
        assert_eq!(lat.logical_parity(&PauliXError::new([q]), Color::G), 1);
        // bulk-only errors commute
        let bulk: Vec<QubitId> = (0..lat.num_qubits() as QubitId)
            .filter(|&q| lat.qubit_class(q) == QubitClass::Bulk)
            .take(4)
            .collect();
        assert_eq!(lat.logical_parity(&PauliXError::new(bulk), Color::G), 0);
        // the boundary operator is a stabilizer product, hence commutes
        let bg = PauliXError::new(lat.boundary_operator(Color::G));
        assert_eq!(lat.logical_parity(&bg, Color::G), 0);
        assert!(lat.syndrome(&bg).is_empty());
    }
}
