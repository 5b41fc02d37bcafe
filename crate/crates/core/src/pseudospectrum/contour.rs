//! Marching-squares extraction of `{ value = level }` from a [`ScalarField`].

use std::collections::HashMap;

use num_complex::Complex64;

use super::grid::ScalarField;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

type EdgeId = usize;

fn h_edge(nx: usize, i: usize, j: usize) -> EdgeId {
    2 * (j * nx + i)
}

fn v_edge(nx: usize, i: usize, j: usize) -> EdgeId {
    2 * (j * nx + i) + 1
}

fn crossing(field: &ScalarField, level: f64, edge: EdgeId) -> Complex64 {
    let g = &field.grid;
    let node = edge / 2;
    let (i, j) = g.coords(node);
    let (i2, j2) = if edge % 2 == 0 { (i + 1, j) } else { (i, j + 1) };
    let a = field.value(i, j);
    let b = field.value(i2, j2);
    let t = if a == b { 0.5 } else { ((level - a) / (b - a)).clamp(0.0, 1.0) };
    g.point(i, j) + (g.point(i2, j2) - g.point(i, j)) * t
}

/// Segments of the level set, one or two per cell, as pairs of edge ids.
fn segments(field: &ScalarField, level: f64) -> Vec<(EdgeId, EdgeId)> {
    let g = &field.grid;
    let nx = g.nx;
    let mut segs = Vec::new();
    for j in 0..g.ny - 1 {
        for i in 0..nx - 1 {
            let v = [
                field.value(i, j),
                field.value(i + 1, j),
                field.value(i + 1, j + 1),
                field.value(i, j + 1),
            ];
            let case = v
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &x)| acc | (((x <= level) as u8) << k));
            let bottom = h_edge(nx, i, j);
            let right = v_edge(nx, i + 1, j);
            let top = h_edge(nx, i, j + 1);
            let left = v_edge(nx, i, j);
            match case {
                0 | 15 => {}
                1 | 14 => segs.push((left, bottom)),
                2 | 13 => segs.push((bottom, right)),
                3 | 12 => segs.push((left, right)),
                4 | 11 => segs.push((right, top)),
                6 | 9 => segs.push((bottom, top)),
                7 | 8 => segs.push((left, top)),
                5 | 10 => {
                    let centre_inside = (v.iter().sum::<f64>() / 4.0 <= level) as u8;
                    // corners 0 and 2 inside (case 5) or corners 1 and 3 (case 10)
                    if (case == 5) == (centre_inside == 1) {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    } else {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segs
}

/// Level curves of the field at `level`, joined into polylines in a
/// deterministic order.
pub fn contour_polylines(field: &ScalarField, level: f64) -> Vec<Polyline> {
    let segs = segments(field, level);
    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segs.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let other = |k: usize, e: EdgeId| if segs[k].0 == e { segs[k].1 } else { segs[k].0 };
    let next_unused = |e: EdgeId, used: &[bool]| -> Option<usize> {
        by_edge.get(&e).and_then(|v| v.iter().copied().find(|&k| !used[k]))
    };

    // Open curves start at edges used once; closed loops take the rest.
    let mut starts: Vec<(usize, EdgeId)> = Vec::new();
    for (k, &(a, b)) in segs.iter().enumerate() {
        if by_edge[&a].len() == 1 {
            starts.push((k, a));
        } else if by_edge[&b].len() == 1 {
            starts.push((k, b));
        }
    }
    starts.extend(segs.iter().enumerate().map(|(k, &(a, _))| (k, a)));

    let mut lines = Vec::new();
    for (k0, e0) in starts {
        if used[k0] {
            continue;
        }
        let mut edges = vec![e0];
        let mut k = k0;
        let mut e = e0;
        loop {
            used[k] = true;
            e = other(k, e);
            edges.push(e);
            match next_unused(e, &used) {
                Some(nk) => k = nk,
                None => break,
            }
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        lines.push(Polyline {
            points: edges.iter().map(|&e| crossing(field, level, e)).collect(),
            closed,
        });
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matpoly::{MatrixPolynomial, WeightPolynomial};
    use crate::pseudospectrum::grid::{compute_field, GridSpec};

    #[test]
    fn circle_contour() {
        let a = Complex64::new(0.2, 0.1);
        let p = MatrixPolynomial::scalar(&[-a, Complex64::new(1.0, 0.0)]).unwrap();
        let g = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 81, 81).unwrap();
        let f = compute_field(&p, &WeightPolynomial::unit(), g);
        let lines = contour_polylines(&f, 0.5);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        let cell = g.cell_diagonal();
        for z in &lines[0].points {
            assert!(((z - a).norm() - 0.5).abs() < cell);
        }
    }

    #[test]
    fn open_curve_at_window_edge() {
        let p = MatrixPolynomial::scalar(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let g = GridSpec::new(0.0, 2.0, -2.0, 2.0, 41, 81).unwrap();
        let f = compute_field(&p, &WeightPolynomial::unit(), g);
        let lines = contour_polylines(&f, 1.0);
        assert_eq!(lines.len(), 1);
        assert!(!lines[0].closed);
    }

    #[test]
    fn two_separate_loops() {
        let p = MatrixPolynomial::diagonal(&[
            vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
        .unwrap();
        let g = GridSpec::new(-2.0, 2.0, -1.0, 1.0, 81, 41).unwrap();
        let f = compute_field(&p, &WeightPolynomial::unit(), g);
        let lines = contour_polylines(&f, 0.5);
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| l.closed));
    }
}
