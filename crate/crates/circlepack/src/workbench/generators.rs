//! Deterministic example complexes with known symmetries: hex-lattice disc
//! balls, reflective annuli, flat tori, and the pinned broken annulus.

use thiserror::Error;

use crate::complex::{build_complex, Complex, ComplexError, Vertex};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("requested complex is too small: {0}")]
    TooSmall(&'static str),
    #[error("generator produced an invalid complex: {0}")]
    Invalid(#[from] ComplexError),
}

/// Hex-lattice ball with the given number of rings around the center.
/// Vertex 1 is the center; vertex count is 1 + 3k(k+1).
pub fn gen_disc(rings: usize) -> Result<Complex, GenError> {
    if rings < 1 {
        return Err(GenError::TooSmall("disc needs at least 1 ring"));
    }
    let n = rings as i64;
    let dist = |q: i64, r: i64| (q.abs() + r.abs() + (q + r).abs()) / 2;
    let mut coords: Vec<(i64, i64)> = Vec::new();
    for q in -n..=n {
        for r in -n..=n {
            if dist(q, r) <= n {
                coords.push((q, r));
            }
        }
    }
    // Center first so that vertex 1 is the center of the ball.
    coords.sort_by_key(|&(q, r)| (dist(q, r), q, r));
    let id = |q: i64, r: i64| -> Option<Vertex> {
        coords.iter().position(|&c| c == (q, r)).map(|i| i + 1)
    };
    let mut faces = Vec::new();
    // Base coordinates range one past the ball so that every triangle whose
    // three corners lie in the ball is generated.
    for q in -n - 1..=n {
        for r in -n - 1..=n {
            // Up triangle (q,r),(q+1,r),(q,r+1) and down triangle
            // (q+1,r),(q+1,r+1),(q,r+1); both counterclockwise in the plane.
            if let (Some(a), Some(b), Some(c)) = (id(q, r), id(q + 1, r), id(q, r + 1)) {
                faces.push([a, b, c]);
            }
            if let (Some(a), Some(b), Some(c)) = (id(q + 1, r), id(q + 1, r + 1), id(q, r + 1)) {
                faces.push([a, b, c]);
            }
        }
    }
    Ok(build_complex(faces)?)
}

/// Vertex id in the annulus grid: row in 0..rings, col in 0..cols.
pub fn annulus_vertex(cols: usize, row: usize, col: usize) -> Vertex {
    row * cols + (col % cols) + 1
}

/// Index of the combinatorial midline row (exact reflection axis for odd
/// `rings`).
pub fn annulus_midline_row(rings: usize) -> usize {
    (rings - 1) / 2
}

/// Cylinder triangulation with `rings` vertex rows of `cols` columns.
///
/// Band slants mirror across the midline, so for odd `rings` the row
/// reflection is an automorphism; the half-turn column shift is an
/// automorphism whenever `cols` is even.
pub fn gen_annulus(rings: usize, cols: usize) -> Result<Complex, GenError> {
    if rings < 3 {
        return Err(GenError::TooSmall("annulus needs at least 3 rings"));
    }
    if cols < 4 {
        return Err(GenError::TooSmall("annulus needs at least 4 columns"));
    }
    let mid = annulus_midline_row(rings);
    let v = |i: usize, j: usize| annulus_vertex(cols, i, j);
    let mut faces = Vec::new();
    for i in 0..rings - 1 {
        for j in 0..cols {
            let (a, b, c, d) = (v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j));
            if i < mid {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            } else {
                faces.push([a, b, d]);
                faces.push([b, c, d]);
            }
        }
    }
    Ok(build_complex(faces)?)
}

/// The pinned broken annulus K': `gen_annulus` with two mirror-image edge
/// flips at column 0 (outermost bands). The flips preserve the reflective
/// midline symmetry but break the half-turn translational symmetry.
pub fn broken_annulus(rings: usize, cols: usize) -> Result<Complex, GenError> {
    let k = gen_annulus(rings, cols)?;
    let v = |i: usize, j: usize| annulus_vertex(cols, i, j);
    let k = k.edge_flip(v(0, 0), v(1, 1))?;
    let k = k.edge_flip(v(rings - 2, 1), v(rings - 1, 0))?;
    Ok(k)
}

/// Vertex id in the torus grid: row in 0..n, col in 0..m.
pub fn torus_vertex(m: usize, row: usize, col: usize) -> Vertex {
    row * m + (col % m) + 1
}

/// Flat n x m torus lattice; half shifts in each direction are automorphisms
/// when the respective dimension is even.
pub fn gen_torus(n: usize, m: usize) -> Result<Complex, GenError> {
    if n < 5 || m < 5 {
        return Err(GenError::TooSmall("torus needs at least a 5x5 lattice"));
    }
    let v = |i: usize, j: usize| torus_vertex(m, i % n, j);
    let mut faces = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let (a, b, c, d) = (v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok(build_complex(faces)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SurfaceType;

    /// Check that `map` is an automorphism; `reversing` selects orientation.
    fn is_automorphism(k: &Complex, map: &dyn Fn(Vertex) -> Vertex, reversing: bool) -> bool {
        k.faces().iter().all(|f| {
            let (x, y, z) = (map(f[0]), map(f[1]), map(f[2]));
            let probe = if reversing { (y, x) } else { (x, y) };
            match k.face_with_directed_edge(probe.0, probe.1) {
                Some(g) => {
                    let mut got = k.faces()[g];
                    let mut want = [x, y, z];
                    got.sort_unstable();
                    want.sort_unstable();
                    got == want
                }
                None => false,
            }
        })
    }

    #[test]
    fn disc_counts() {
        for rings in 1..=4 {
            let k = gen_disc(rings).unwrap();
            assert_eq!(k.surface(), SurfaceType::Disc);
            assert_eq!(k.vertex_count(), 1 + 3 * rings * (rings + 1));
            assert!(k.is_interior(1));
            assert_eq!(k.degree(1), 6);
        }
        assert!(gen_disc(0).is_err());
    }

    #[test]
    fn annulus_symmetries() {
        let (rings, cols) = (5, 12);
        let k = gen_annulus(rings, cols).unwrap();
        assert_eq!(k.surface(), SurfaceType::Annulus);
        assert_eq!(k.vertex_count(), rings * cols);
        // Midline reflection: orientation-reversing automorphism.
        let reflect = |v: Vertex| {
            let (i, j) = ((v - 1) / cols, (v - 1) % cols);
            annulus_vertex(cols, rings - 1 - i, j)
        };
        assert!(is_automorphism(&k, &reflect, true));
        // Half-turn translation: orientation-preserving automorphism.
        let shift = |v: Vertex| {
            let (i, j) = ((v - 1) / cols, (v - 1) % cols);
            annulus_vertex(cols, i, j + cols / 2)
        };
        assert!(is_automorphism(&k, &shift, false));
        // Midline vertices are interior with hexagonal flowers.
        let mid = annulus_midline_row(rings);
        assert_eq!(k.degree(annulus_vertex(cols, mid, 0)), 6);
    }

    #[test]
    fn broken_annulus_breaks_translation_only() {
        let (rings, cols) = (5, 12);
        let k = broken_annulus(rings, cols).unwrap();
        assert_eq!(k.surface(), SurfaceType::Annulus);
        let reflect = |v: Vertex| {
            let (i, j) = ((v - 1) / cols, (v - 1) % cols);
            annulus_vertex(cols, rings - 1 - i, j)
        };
        assert!(is_automorphism(&k, &reflect, true));
        let shift = |v: Vertex| {
            let (i, j) = ((v - 1) / cols, (v - 1) % cols);
            annulus_vertex(cols, i, j + cols / 2)
        };
        assert!(!is_automorphism(&k, &shift, false));
    }

    #[test]
    fn torus_symmetries() {
        let (n, m) = (8, 8);
        let k = gen_torus(n, m).unwrap();
        assert_eq!(k.surface(), SurfaceType::Torus);
        assert_eq!(k.vertex_count(), n * m);
        assert!(k.vertices().all(|v| k.degree(v) == 6));
        let half_row = |v: Vertex| {
            let (i, j) = ((v - 1) / m, (v - 1) % m);
            torus_vertex(m, (i + n / 2) % n, j)
        };
        let half_col = |v: Vertex| {
            let (i, j) = ((v - 1) / m, (v - 1) % m);
            torus_vertex(m, i, j + m / 2)
        };
        assert!(is_automorphism(&k, &half_row, false));
        assert!(is_automorphism(&k, &half_col, false));
    }
}
