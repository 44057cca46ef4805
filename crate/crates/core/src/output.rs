//! Snapshot and slice output: legacy-ASCII rectilinear VTK files, CSV line
//! slices evaluated from the element polynomials, and reference-profile
//! loading for comparisons.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::SliceKind;
use crate::dg::SolutionField;
use crate::error::{Error, Result};
use crate::physics::{PhysicsSystem, MAX_VARS};

/// Writes nodal conserved and primitive variables plus the per-element
/// blending weight `lambda` as point data. Interface nodes of neighbouring
/// elements are kept separately, so coordinates repeat at element faces.
pub fn write_vtk(
    path: &Path,
    field: &SolutionField,
    physics: &dyn PhysicsSystem,
    lambda: Option<&[f64]>,
    title: &str,
) -> Result<()> {
    fs::write(path, vtk_string(field, physics, lambda, title))?;
    Ok(())
}

fn node_coordinates(field: &SolutionField) -> (Vec<f64>, Vec<f64>) {
    let mesh = field.mesh();
    let nodes = field.reference().nodes();
    let xs = (0..mesh.nx)
        .flat_map(|ex| nodes.iter().map(move |&xi| mesh.x_left + (ex as f64 + 0.5 * (xi + 1.0)) * mesh.dx))
        .collect();
    let ys = (0..mesh.ny)
        .flat_map(|ey| nodes.iter().map(move |&eta| mesh.y_bottom + (ey as f64 + 0.5 * (eta + 1.0)) * mesh.dy))
        .collect();
    (xs, ys)
}

pub fn vtk_string(field: &SolutionField, physics: &dyn PhysicsSystem, lambda: Option<&[f64]>, title: &str) -> String {
    let mesh = field.mesh();
    let np = field.num_nodes();
    let nv = field.num_vars();
    let (xs, ys) = node_coordinates(field);
    let (gx, gy) = (xs.len(), ys.len());
    let mut s = String::with_capacity(gx * gy * (nv * 2 + 1) * 24);
    let title = title.replace('\n', " ");
    let _ = writeln!(s, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET RECTILINEAR_GRID");
    let _ = writeln!(s, "DIMENSIONS {gx} {gy} 1");
    let mut coords = |name: &str, v: &[f64]| {
        let _ = writeln!(s, "{name} {} double", v.len());
        for c in v {
            let _ = writeln!(s, "{c:?}");
        }
    };
    coords("X_COORDINATES", &xs);
    coords("Y_COORDINATES", &ys);
    coords("Z_COORDINATES", &[0.0]);
    let _ = writeln!(s, "POINT_DATA {}", gx * gy);

    // global point (px, py) -> (element, i, j)
    let locate = |px: usize, py: usize| (mesh.element_index(px / np, py / np), px % np, py % np);
    let scalar = |s: &mut String, name: &str, value: &dyn Fn(usize, usize, usize) -> f64| {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for py in 0..gy {
            for px in 0..gx {
                let (n, i, j) = locate(px, py);
                let _ = writeln!(s, "{:?}", value(n, i, j));
            }
        }
    };
    let cons_names = physics.var_names();
    for (q, name) in cons_names.iter().enumerate() {
        scalar(&mut s, name, &|n, i, j| field.get(n, i, j, q));
    }
    for (q, name) in physics.primitive_names().iter().enumerate() {
        if cons_names.contains(name) {
            continue;
        }
        scalar(&mut s, name, &|n, i, j| {
            let mut w = [0.0; MAX_VARS];
            physics.to_primitive(field.node(n, i, j), &mut w[..nv]);
            w[q]
        });
    }
    if let Some(l) = lambda {
        scalar(&mut s, "lambda", &|n, _, _| l[n]);
    }
    s
}

/// Contents of a rectilinear VTK file written by [`write_vtk`].
#[derive(Debug, Clone, PartialEq)]
pub struct VtkRectilinear {
    pub title: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fields: Vec<(String, Vec<f64>)>,
}

impl VtkRectilinear {
    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

pub fn read_vtk(path: &Path) -> Result<VtkRectilinear> {
    parse_vtk(&fs::read_to_string(path)?)
}

pub fn parse_vtk(text: &str) -> Result<VtkRectilinear> {
    let bad = |msg: &str| Error::config(format!("malformed VTK file: {msg}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty"))?;
    if !header.starts_with("# vtk DataFile") {
        return Err(bad("missing header"));
    }
    let title = lines.next().ok_or_else(|| bad("missing title"))?.to_string();
    let mut tokens = lines.flat_map(str::split_whitespace);
    let mut next = || tokens.next().ok_or_else(|| bad("unexpected end of file"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad(&format!("not a number: {t}")));
    let count = |t: &str| t.parse::<usize>().map_err(|_| bad(&format!("not a count: {t}")));

    if next()? != "ASCII" {
        return Err(bad("only ASCII files are supported"));
    }
    if next()? != "DATASET" || next()? != "RECTILINEAR_GRID" {
        return Err(bad("not a rectilinear grid"));
    }
    if next()? != "DIMENSIONS" {
        return Err(bad("missing DIMENSIONS"));
    }
    let (gx, gy, gz) = (count(next()?)?, count(next()?)?, count(next()?)?);
    let mut read_coords = |label: &str, expected: usize| -> Result<Vec<f64>> {
        if next()? != label {
            return Err(bad(&format!("missing {label}")));
        }
        let n = count(next()?)?;
        if n != expected {
            return Err(bad(&format!("{label} count mismatch")));
        }
        next()?;
        (0..n).map(|_| num(next()?)).collect()
    };
    let x = read_coords("X_COORDINATES", gx)?;
    let y = read_coords("Y_COORDINATES", gy)?;
    read_coords("Z_COORDINATES", gz)?;
    let mut fields = Vec::new();
    let mut points = None;
    while let Ok(tok) = next() {
        match tok {
            "POINT_DATA" => points = Some(count(next()?)?),
            "SCALARS" => {
                let n = points.ok_or_else(|| bad("SCALARS before POINT_DATA"))?;
                let name = next()?.to_string();
                let _ty = next()?;
                let comps = next()?;
                if comps != "1" {
                    return Err(bad("only single-component scalars are supported"));
                }
                if next()? != "LOOKUP_TABLE" {
                    return Err(bad("missing LOOKUP_TABLE"));
                }
                next()?;
                let values = (0..n).map(|_| num(next()?)).collect::<Result<Vec<_>>>()?;
                fields.push((name, values));
            }
            other => return Err(bad(&format!("unexpected token {other}"))),
        }
    }
    Ok(VtkRectilinear { title, x, y, fields })
}

/// Sampled profile along a line: arclength, position and value.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: Vec<f64>,
}

/// Resolves a variable name against the primitive names first, then the conserved names.
pub fn variable_index(physics: &dyn PhysicsSystem, name: &str) -> Result<(bool, usize)> {
    if let Some(q) = physics.primitive_names().iter().position(|n| *n == name) {
        return Ok((true, q));
    }
    if let Some(q) = physics.var_names().iter().position(|n| *n == name) {
        return Ok((false, q));
    }
    Err(Error::config(format!("unknown variable '{name}'")))
}

/// Evaluates the solution polynomials at `samples` equispaced points on a line.
pub fn extract_slice(
    field: &SolutionField,
    physics: &dyn PhysicsSystem,
    kind: SliceKind,
    y_const: Option<f64>,
    variable: &str,
    samples: usize,
) -> Result<Slice> {
    let mesh = field.mesh();
    let (start, end) = match kind {
        SliceKind::Diagonal => {
            let lo = mesh.x_left.max(mesh.y_bottom);
            let hi = mesh.x_right.min(mesh.y_top);
            if hi <= lo {
                return Err(Error::config("the line x = y does not cross the domain"));
            }
            ((lo, lo), (hi, hi))
        }
        SliceKind::Horizontal => {
            let y = y_const.ok_or_else(|| Error::config("horizontal slice needs y"))?;
            if !(mesh.y_bottom..=mesh.y_top).contains(&y) {
                return Err(Error::config(format!("slice height {y} outside the domain")));
            }
            ((mesh.x_left, y), (mesh.x_right, y))
        }
    };
    let (primitive, q) = variable_index(physics, variable)?;
    let nv = field.num_vars();
    let length = ((end.0 - start.0).powi(2) + (end.1 - start.1).powi(2)).sqrt();
    let mut out = Slice { s: Vec::new(), x: Vec::new(), y: Vec::new(), value: Vec::new() };
    let mut u = [0.0; MAX_VARS];
    let mut w = [0.0; MAX_VARS];
    for k in 0..samples {
        let a = k as f64 / (samples - 1) as f64;
        let (x, y) = (start.0 + a * (end.0 - start.0), start.1 + a * (end.1 - start.1));
        field.evaluate_state(x, y, &mut u[..nv]);
        let v = if primitive {
            physics.to_primitive(&u[..nv], &mut w[..nv]);
            w[q]
        } else {
            u[q]
        };
        out.s.push(a * length);
        out.x.push(x);
        out.y.push(y);
        out.value.push(v);
    }
    Ok(out)
}

pub fn slice_csv(slice: &Slice, variable: &str) -> String {
    let mut s = format!("s,x,y,{variable}\n");
    for k in 0..slice.s.len() {
        let _ = writeln!(s, "{:?},{:?},{:?},{:?}", slice.s[k], slice.x[k], slice.y[k], slice.value[k]);
    }
    s
}

/// Loads a two-column reference profile `(coordinate, value)`. Comma,
/// semicolon or whitespace separated; lines that do not start with two
/// numbers (headers, comments) are skipped. Extra columns are ignored.
pub fn load_reference_slice(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read reference slice {}: {e}", path.display())))?;
    parse_reference_slice(&text)
}

pub fn parse_reference_slice(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points: Vec<(f64, f64)> = text
        .lines()
        .filter_map(|line| {
            let mut it = line
                .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
                .filter(|t| !t.is_empty());
            let a = it.next()?.parse::<f64>().ok()?;
            let b = it.next()?.parse::<f64>().ok()?;
            Some((a, b))
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::config("reference slice needs at least two data rows"));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(points)
}

/// Maximum difference between a slice and a reference profile, linearly
/// interpolating the reference at the slice coordinates inside its range.
/// `use_x` selects the x coordinate instead of arclength.
pub fn compare_with_reference(slice: &Slice, reference: &[(f64, f64)], use_x: bool) -> f64 {
    let coords = if use_x { &slice.x } else { &slice.s };
    let (lo, hi) = (reference[0].0, reference[reference.len() - 1].0);
    let mut worst = 0.0_f64;
    for (c, v) in coords.iter().zip(&slice.value) {
        if *c < lo || *c > hi {
            continue;
        }
        let k = reference.partition_point(|p| p.0 < *c).clamp(1, reference.len() - 1);
        let (a, b) = (reference[k - 1], reference[k]);
        let r = if b.0 > a.0 { a.1 + (b.1 - a.1) * (c - a.0) / (b.0 - a.0) } else { a.1 };
        worst = worst.max((v - r).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dg::CartesianMesh;
    use crate::physics::Euler;
    use crate::reference::ReferenceElement;
    use approx::assert_abs_diff_eq;

    fn euler_field(f: impl Fn(f64, f64) -> f64) -> SolutionField {
        let mesh = CartesianMesh::new((-1.0, 1.0), (-1.0, 1.0), 3, 2).unwrap();
        let re = Arc::new(ReferenceElement::new(3).unwrap());
        let e = Euler::new(1.4);
        SolutionField::from_fn(mesh, re, 4, |x, y, out| e.to_conservative(&[f(x, y), 0.1, -0.2, 1.0], out))
    }

    #[test]
    fn vtk_round_trip_is_exact() {
        let field = euler_field(|x, y| 1.0 + 0.1 * x + 0.3 * y * y + 1.0 / 3.0);
        let e = Euler::new(1.4);
        let lambda: Vec<f64> = (0..6).map(|n| n as f64 / 7.0).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.vtk");
        write_vtk(&path, &field, &e, Some(&lambda), "test t=0").unwrap();
        let back = read_vtk(&path).unwrap();
        assert_eq!(back.title, "test t=0");
        assert_eq!(back.x.len(), 12);
        assert_eq!(back.y.len(), 8);
        let rho = back.field("rho").unwrap();
        let np = 4;
        for (py, _) in back.y.iter().enumerate() {
            for (px, _) in back.x.iter().enumerate() {
                let n = field.mesh().element_index(px / np, py / np);
                assert_eq!(rho[py * 12 + px], field.get(n, px % np, py % np, 0));
                assert_eq!(back.field("lambda").unwrap()[py * 12 + px], lambda[n]);
            }
        }
        assert!(back.field("p").unwrap().iter().all(|&p| (p - 1.0).abs() < 1e-14));
        assert!(back.field("v1").is_some() && back.field("rho_e").is_some());
        assert!(parse_vtk("garbage").is_err());
    }

    #[test]
    fn diagonal_slice_of_linear_data_is_linear_in_arclength() {
        let field = euler_field(|x, y| 3.0 + x + y);
        let e = Euler::new(1.4);
        let s = extract_slice(&field, &e, SliceKind::Diagonal, None, "rho", 512).unwrap();
        assert_eq!(s.s.len(), 512);
        let len = 8f64.sqrt();
        assert_abs_diff_eq!(s.s[511], len, epsilon = 1e-14);
        for k in 0..512 {
            // x + y = -2 + 2 s / sqrt(2)
            let expected = 3.0 - 2.0 + 2.0 * s.s[k] / 2f64.sqrt();
            assert_abs_diff_eq!(s.value[k], expected, epsilon = 1e-12);
        }
        let h = extract_slice(&field, &e, SliceKind::Horizontal, Some(0.3), "p", 16).unwrap();
        assert!(h.value.iter().all(|&p| (p - 1.0).abs() < 1e-12));
        assert!(extract_slice(&field, &e, SliceKind::Horizontal, Some(3.0), "p", 16).is_err());
        assert!(extract_slice(&field, &e, SliceKind::Diagonal, None, "nope", 16).is_err());
        assert_eq!(slice_csv(&h, "p").lines().count(), 17);
    }

    #[test]
    fn reference_profiles() {
        let r = parse_reference_slice("# x, rho\ncoord,value\n0.0, 1.0\n1.0;3.0\n0.5 2.0 9\n").unwrap();
        assert_eq!(r, vec![(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)]);
        assert!(parse_reference_slice("x,y\n1,2\n").is_err());
        let slice = Slice { s: vec![0.25, 0.75, 2.0], x: vec![0.0; 3], y: vec![0.0; 3], value: vec![1.5, 2.6, 100.0] };
        assert_abs_diff_eq!(compare_with_reference(&slice, &r, false), 0.1, epsilon = 1e-12);
    }
}
