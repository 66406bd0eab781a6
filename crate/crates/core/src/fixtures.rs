//! Small hand-written maps shared by the unit tests.

use crate::map::PolyhedralMap;

pub const N1_FACES: [[u32; 3]; 28] = [
    [0, 1, 2],
    [0, 1, 11],
    [0, 2, 6],
    [0, 6, 8],
    [0, 4, 8],
    [0, 4, 10],
    [0, 10, 11],
    [1, 2, 3],
    [1, 3, 7],
    [1, 7, 9],
    [1, 5, 9],
    [1, 5, 11],
    [2, 3, 4],
    [2, 4, 8],
    [2, 8, 10],
    [2, 6, 10],
    [3, 4, 5],
    [3, 5, 9],
    [3, 7, 11],
    [3, 9, 11],
    [4, 5, 6],
    [4, 6, 10],
    [5, 6, 7],
    [5, 7, 11],
    [6, 7, 8],
    [7, 8, 9],
    [8, 9, 10],
    [9, 10, 11],
];

fn build(faces: &[&[u32]]) -> PolyhedralMap {
    let faces: Vec<Vec<u32>> = faces.iter().map(|f| f.to_vec()).collect();
    PolyhedralMap::from_faces(&faces).unwrap()
}

pub fn n1() -> PolyhedralMap {
    let faces: Vec<Vec<u32>> = N1_FACES.iter().map(|f| f.to_vec()).collect();
    PolyhedralMap::from_faces(&faces).unwrap()
}

pub fn tetrahedron() -> PolyhedralMap {
    build(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
}

/// The 6-vertex triangulation of the real projective plane.
pub fn rp2_6() -> PolyhedralMap {
    build(&[
        &[0, 1, 2],
        &[0, 2, 3],
        &[0, 3, 4],
        &[0, 4, 5],
        &[0, 5, 1],
        &[1, 2, 4],
        &[2, 3, 5],
        &[3, 4, 1],
        &[4, 5, 2],
        &[5, 1, 3],
    ])
}

/// A cube with a square pyramid glued onto its top face.
pub fn cube_with_pyramid() -> PolyhedralMap {
    build(&[
        &[0, 1, 2, 3],
        &[0, 1, 5, 4],
        &[1, 2, 6, 5],
        &[2, 3, 7, 6],
        &[3, 0, 4, 7],
        &[4, 5, 8],
        &[5, 6, 8],
        &[6, 7, 8],
        &[7, 4, 8],
    ])
}
