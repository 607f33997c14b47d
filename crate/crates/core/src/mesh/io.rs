//! OBJ and ASCII PLY readers.
//!
//! OBJ: only `v` and `f` records are read; indices are 1-based (negative
//! indices count back from the last vertex) and anything after a `/` in a
//! face token is ignored. PLY: ASCII only, `x`/`y`/`z` vertex properties
//! and a vertex-index list on faces. Polygons are fan-triangulated.

use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use nalgebra::Point3;

use super::{MeshError, Result, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    PlyAscii,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "obj" => Some(Self::Obj),
            "ply" => Some(Self::PlyAscii),
            _ => None,
        }
    }
}

pub fn load_mesh_file(path: &Path) -> Result<TriMesh> {
    let format = MeshFormat::from_path(path)
        .ok_or_else(|| MeshError::Domain(format!("unknown mesh extension: {}", path.display())))?;
    let file = std::fs::File::open(path)?;
    load_mesh(file, format)
}

pub fn load_mesh<R: Read>(source: R, format: MeshFormat) -> Result<TriMesh> {
    let reader = BufReader::new(source);
    let (vertices, faces) = match format {
        MeshFormat::Obj => parse_obj(reader)?,
        MeshFormat::PlyAscii => parse_ply(reader)?,
    };
    if faces.is_empty() {
        return Err(MeshError::Empty);
    }
    TriMesh::new(vertices, faces)
}

fn perr(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse { line, message: message.into() }
}

fn parse_f64(tok: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    let v: f64 = tok.parse().map_err(|_| perr(line, format!("invalid {what} `{tok}`")))?;
    if !v.is_finite() {
        return Err(perr(line, format!("non-finite {what}")));
    }
    Ok(v)
}

fn fan(poly: &[usize], faces: &mut Vec<[usize; 3]>) {
    for k in 1..poly.len() - 1 {
        faces.push([poly[0], poly[k], poly[k + 1]]);
    }
}

type RawMesh = (Vec<Point3<f64>>, Vec<[usize; 3]>);

fn parse_obj<R: BufRead>(reader: R) -> Result<RawMesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut poly = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let x = parse_f64(toks.next(), lineno, "x")?;
                let y = parse_f64(toks.next(), lineno, "y")?;
                let z = parse_f64(toks.next(), lineno, "z")?;
                vertices.push(Point3::new(x, y, z));
            }
            Some("f") => {
                poly.clear();
                for tok in toks {
                    let idx = tok.split('/').next().unwrap_or("");
                    let raw: i64 = idx.parse().map_err(|_| perr(lineno, format!("invalid face index `{tok}`")))?;
                    let resolved = match raw {
                        0 => return Err(perr(lineno, "face index 0 (OBJ indices are 1-based)")),
                        r if r > 0 => (r - 1) as usize,
                        r => {
                            let back = (-r) as usize;
                            if back > vertices.len() {
                                return Err(perr(lineno, format!("relative index {r} before first vertex")));
                            }
                            vertices.len() - back
                        }
                    };
                    poly.push(resolved);
                }
                if poly.len() < 3 {
                    return Err(perr(lineno, "face with fewer than 3 vertices"));
                }
                fan(&poly, &mut faces);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

struct PlyElement {
    name: String,
    count: usize,
    props: Vec<String>,
    list_prop: Option<usize>,
}

fn parse_ply<R: BufRead>(reader: R) -> Result<RawMesh> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = || -> Result<Option<(usize, String)>> {
        match lines.next() {
            Some((n, Ok(l))) => Ok(Some((n, l))),
            Some((_, Err(e))) => Err(e.into()),
            None => Ok(None),
        }
    };

    match next_line()? {
        Some((_, l)) if l.trim() == "ply" => {}
        Some((n, _)) => return Err(perr(n, "missing `ply` magic")),
        None => return Err(perr(1, "empty input")),
    }

    let mut elements: Vec<PlyElement> = Vec::new();
    loop {
        let (n, line) = next_line()?.ok_or_else(|| perr(0, "unterminated header"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["format", fmt, ..] => {
                if *fmt != "ascii" {
                    return Err(perr(n, format!("unsupported PLY format `{fmt}`, only ascii")));
                }
            }
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => {
                let count = count.parse().map_err(|_| perr(n, "invalid element count"))?;
                elements.push(PlyElement { name: name.to_string(), count, props: Vec::new(), list_prop: None });
            }
            ["property", "list", _, _, name] => {
                let el = elements.last_mut().ok_or_else(|| perr(n, "property before element"))?;
                if el.list_prop.is_some() {
                    return Err(perr(n, "multiple list properties are not supported"));
                }
                el.list_prop = Some(el.props.len());
                el.props.push(name.to_string());
            }
            ["property", _, name] => {
                let el = elements.last_mut().ok_or_else(|| perr(n, "property before element"))?;
                el.props.push(name.to_string());
            }
            ["end_header"] => break,
            _ => return Err(perr(n, format!("unrecognised header line `{line}`"))),
        }
    }

    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut poly = Vec::new();
    for el in &elements {
        let axis = |name: &str| el.props.iter().position(|p| p == name);
        for _ in 0..el.count {
            let (n, line) = next_line()?.ok_or_else(|| perr(0, format!("unexpected end of `{}` data", el.name)))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match el.name.as_str() {
                "vertex" => {
                    if el.list_prop.is_some() {
                        return Err(perr(n, "list properties on vertices are not supported"));
                    }
                    let (ix, iy, iz) = match (axis("x"), axis("y"), axis("z")) {
                        (Some(x), Some(y), Some(z)) => (x, y, z),
                        _ => return Err(perr(n, "vertex element lacks x/y/z")),
                    };
                    if toks.len() < el.props.len() {
                        return Err(perr(n, "too few vertex values"));
                    }
                    let x = parse_f64(toks.get(ix).copied(), n, "x")?;
                    let y = parse_f64(toks.get(iy).copied(), n, "y")?;
                    let z = parse_f64(toks.get(iz).copied(), n, "z")?;
                    vertices.push(Point3::new(x, y, z));
                }
                "face" => {
                    let lp = el.list_prop.ok_or_else(|| perr(n, "face element has no index list"))?;
                    // scalar properties before the list occupy one token each
                    let count: usize = toks
                        .get(lp)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(n, "invalid face vertex count"))?;
                    if count < 3 {
                        return Err(perr(n, "face with fewer than 3 vertices"));
                    }
                    poly.clear();
                    for k in 0..count {
                        let t = toks.get(lp + 1 + k).ok_or_else(|| perr(n, "truncated face"))?;
                        let idx: usize = t.parse().map_err(|_| perr(n, format!("invalid face index `{t}`")))?;
                        poly.push(idx);
                    }
                    fan(&poly, &mut faces);
                }
                _ => {}
            }
        }
    }
    Ok((vertices, faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_volume, MeshError};

    const CUBE_OBJ: &str = "\
# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
vn 0 0 1
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
";

    #[test]
    fn obj_cube() {
        let m = load_mesh(CUBE_OBJ.as_bytes(), MeshFormat::Obj).unwrap();
        assert_eq!(m.vertices().len(), 8);
        assert_eq!(m.faces().len(), 12);
        assert_eq!(mesh_volume(&m).unwrap(), 1.0);
    }

    #[test]
    fn obj_quads_are_fanned_and_slashes_ignored() {
        let src = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1/1 2/2/1 3/3/1 4/4/1\n";
        let m = load_mesh(src.as_bytes(), MeshFormat::Obj).unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn obj_zero_index_is_error_with_line() {
        let src = "v 0 0 0\nv 1 0 0\nv 1 1 0\nf 0 1 2\n";
        match load_mesh(src.as_bytes(), MeshFormat::Obj) {
            Err(MeshError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn obj_malformed_vertex() {
        let src = "v 0 0\n";
        assert!(matches!(load_mesh(src.as_bytes(), MeshFormat::Obj), Err(MeshError::Parse { line: 1, .. })));
    }

    #[test]
    fn obj_without_faces_is_empty() {
        let src = "v 0 0 0\n";
        assert!(matches!(load_mesh(src.as_bytes(), MeshFormat::Obj), Err(MeshError::Empty)));
    }

    #[test]
    fn obj_out_of_range_index() {
        let src = "v 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 9\n";
        assert!(matches!(load_mesh(src.as_bytes(), MeshFormat::Obj), Err(MeshError::BadIndex { .. })));
    }

    #[test]
    fn ply_cube_with_quads() {
        let src = "ply
format ascii 1.0
comment unit cube
element vertex 8
property float x
property float y
property float z
element face 6
property list uchar int vertex_indices
end_header
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
";
        let m = load_mesh(src.as_bytes(), MeshFormat::PlyAscii).unwrap();
        assert_eq!(m.faces().len(), 12);
        assert!((mesh_volume(&m).unwrap() - 1.0).abs() < 1e-15);
        assert!(m.closedness().is_closed());
    }

    #[test]
    fn ply_binary_rejected() {
        let src = "ply\nformat binary_little_endian 1.0\nend_header\n";
        assert!(matches!(load_mesh(src.as_bytes(), MeshFormat::PlyAscii), Err(MeshError::Parse { line: 2, .. })));
    }

    #[test]
    fn ply_bad_number_reports_line() {
        let src = "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nend_header\n0 abc 0\n";
        assert!(matches!(load_mesh(src.as_bytes(), MeshFormat::PlyAscii), Err(MeshError::Parse { line: 8, .. })));
    }
}
