//! Plain-text mesh format.
//!
//! ```text
//! DIM n_vertices n_cells
//! x y            (one line per vertex; 1D meshes write only x)
//! k i1 ... ik g  (vertex count, vertex indices, ghost flag 0/1)
//! ```

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Domain, Mesh};
use crate::error::{Error, Result};
use crate::geometry::ConvexPolytope;
use crate::scalar::{lit, to_f64, Point, Real};

pub fn write_mesh<T: Real, W: Write>(mesh: &Mesh<T>, mut w: W) -> Result<()> {
    let dim = mesh.dim();
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut verts: Vec<Point<T>> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(mesh.n_cells());
    for c in mesh.cells() {
        let ids = c
            .vertices()
            .into_iter()
            .map(|p| {
                let key = (to_f64(p[0]).to_bits(), to_f64(p[1]).to_bits());
                *index.entry(key).or_insert_with(|| {
                    verts.push(p);
                    verts.len() - 1
                })
            })
            .collect();
        cells.push(ids);
    }
    writeln!(w, "{} {} {}", dim, verts.len(), cells.len())?;
    for p in &verts {
        if dim == 1 {
            writeln!(w, "{}", to_f64(p[0]))?;
        } else {
            writeln!(w, "{} {}", to_f64(p[0]), to_f64(p[1]))?;
        }
    }
    for (ids, g) in cells.iter().zip(mesh.ghost_flags()) {
        write!(w, "{}", ids.len())?;
        for i in ids {
            write!(w, " {i}")?;
        }
        writeln!(w, " {}", u8::from(*g))?;
    }
    Ok(())
}

/// Reads a mesh written by [`write_mesh`]; the domain is supplied separately.
pub fn read_mesh<T: Real, R: BufRead>(r: R, domain: Domain<T>) -> Result<Mesh<T>> {
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let mut next = || -> Result<(usize, Vec<String>)> {
        let (no, line) = lines.next().ok_or(Error::Parse { line: 0, message: "unexpected end of file".into() })?;
        Ok((no, line?.split_whitespace().map(str::to_owned).collect()))
    };
    let parse_usize = |no: usize, s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse { line: no, message: format!("expected an integer, got {s:?}") })
    };
    let (no, head) = next()?;
    if head.len() != 3 {
        return Err(Error::Parse { line: no, message: "header must be \"DIM n_vertices n_cells\"".into() });
    }
    let dim = parse_usize(no, &head[0])?;
    let nv = parse_usize(no, &head[1])?;
    let nc = parse_usize(no, &head[2])?;
    if dim != domain.dim() {
        return Err(Error::Parse { line: no, message: "dimension does not match the domain".into() });
    }
    let mut verts: Vec<Point<T>> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (no, tok) = next()?;
        if tok.len() != dim {
            return Err(Error::Parse { line: no, message: format!("expected {dim} coordinates") });
        }
        let mut p = [T::zero(); 2];
        for (k, t) in tok.iter().enumerate() {
            let v: f64 = t.parse().map_err(|_| Error::Parse { line: no, message: format!("bad coordinate {t:?}") })?;
            p[k] = lit(v);
        }
        verts.push(p);
    }
    let mut cells = Vec::with_capacity(nc);
    let mut ghost = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (no, tok) = next()?;
        let k = parse_usize(no, tok.first().map(String::as_str).unwrap_or(""))?;
        if tok.len() != k + 2 {
            return Err(Error::Parse { line: no, message: "cell line must be \"k i1 .. ik ghostflag\"".into() });
        }
        let mut pts = Vec::with_capacity(k);
        for t in &tok[1..=k] {
            let i = parse_usize(no, t)?;
            pts.push(*verts.get(i).ok_or(Error::Parse { line: no, message: format!("vertex index {i} out of range") })?);
        }
        let cell = if dim == 1 {
            if k != 2 {
                return Err(Error::Parse { line: no, message: "1D cells have two vertices".into() });
            }
            ConvexPolytope::interval(pts[0][0], pts[1][0])
        } else {
            ConvexPolytope::polygon(pts)
        }
        .map_err(|e| Error::Parse { line: no, message: e.to_string() })?;
        cells.push(cell);
        ghost.push(match tok[k + 1].as_str() {
            "0" => false,
            "1" => true,
            other => return Err(Error::Parse { line: no, message: format!("ghost flag must be 0 or 1, got {other:?}") }),
        });
    }
    Mesh::from_parts(cells, ghost, domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_voronoi() {
        let m = Mesh::<f64>::random_voronoi(20, 1, 3).unwrap();
        let p = m.pad_ghost(m.mollifier_width(1.0)).unwrap();
        let mut buf = Vec::new();
        write_mesh(&p, &mut buf).unwrap();
        let back: Mesh<f64> = read_mesh(&buf[..], Domain::unit_square()).unwrap();
        assert_eq!(back.n_cells(), p.n_cells());
        assert_eq!(back.ghost_flags(), p.ghost_flags());
        for i in 0..p.n_cells() {
            assert!((back.cell(i).measure() - p.cell(i).measure()).abs() < 1e-15);
        }
    }

    #[test]
    fn round_trip_1d() {
        let m = Mesh::<f64>::uniform_1d(4, 0.0, 1.0).unwrap().pad_ghost(0.5).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("1 7 6\n"));
        let back = read_mesh(&buf[..], Domain::unit_interval()).unwrap();
        assert_eq!(back.cells(), m.cells());
    }

    #[test]
    fn malformed_input() {
        let bad = "2 3 1\n0 0\n1 0\n0 1\n3 0 1 5 0\n";
        assert!(matches!(read_mesh::<f64, _>(bad.as_bytes(), Domain::unit_square()), Err(Error::Parse { line: 5, .. })));
    }
}
