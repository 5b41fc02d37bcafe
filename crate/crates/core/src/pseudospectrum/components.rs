use std::collections::VecDeque;

use num_complex::Complex64;

use super::grid::ScalarField;
use crate::error::{Error, Result};
use crate::matpoly::EigenReport;

/// Relative bracket width at which [`merge_epsilon`] stops.
pub const TAU_EPS_REL: f64 = 1e-6;

/// Connected components of `{ value ≤ ε }` on the grid (8-connectivity).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub epsilon: f64,
    pub count: usize,
    /// Per-node label, `0` outside the sublevel set, components numbered from 1
    /// in row-major order of their first node.
    pub labels: Vec<u32>,
    /// Eigenvalues (with algebraic multiplicity) found in each component;
    /// entry `k` belongs to label `k + 1`.
    pub eigen_assignment: Vec<Vec<(Complex64, usize)>>,
    /// Per component: false when it touches the window edge.
    pub bounded: Vec<bool>,
    /// Label of each eigenvalue of the report, in report order.
    pub eigen_labels: Vec<u32>,
}

impl ComponentReport {
    pub fn all_bounded(&self) -> bool {
        self.bounded.iter().all(|&b| b)
    }

    /// Components that contain no eigenvalue.
    pub fn empty_components(&self) -> usize {
        self.eigen_assignment.iter().filter(|e| e.is_empty()).count()
    }

    /// Total algebraic multiplicity per component.
    pub fn multiplicity_totals(&self) -> Vec<usize> {
        self.eigen_assignment
            .iter()
            .map(|e| e.iter().map(|(_, m)| m).sum())
            .collect()
    }
}

/// Labels `{ value ≤ eps }` without eigenvalue bookkeeping. Returns the
/// labels and the component count.
pub fn label_sublevel(field: &ScalarField, eps: f64) -> (Vec<u32>, usize) {
    let g = &field.grid;
    let mut labels = vec![0u32; g.len()];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..g.len() {
        if labels[start] != 0 || !(field.values[start] <= eps) {
            continue;
        }
        count += 1;
        labels[start] = count;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            let (i, j) = g.coords(idx);
            for (ni, nj) in g.neighbors8(i, j) {
                let nidx = g.index(ni, nj);
                if labels[nidx] == 0 && field.values[nidx] <= eps {
                    labels[nidx] = count;
                    queue.push_back(nidx);
                }
            }
        }
    }
    (labels, count as usize)
}

/// Label of the component holding `z`: its nearest node if labelled,
/// otherwise the lowest-valued labelled corner of its cell.
pub fn label_at(field: &ScalarField, labels: &[u32], z: Complex64) -> Option<u32> {
    let g = &field.grid;
    let (i, j) = g.nearest(z)?;
    let l = labels[g.index(i, j)];
    if l != 0 {
        return Some(l);
    }
    g.cell_corners(z)
        .into_iter()
        .map(|(i, j)| g.index(i, j))
        .filter(|&idx| labels[idx] != 0)
        .min_by(|&a, &b| field.values[a].partial_cmp(&field.values[b]).unwrap())
        .map(|idx| labels[idx])
}

pub fn components(field: &ScalarField, eps: f64, eigen: &EigenReport) -> Result<ComponentReport> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let g = &field.grid;
    let (labels, count) = label_sublevel(field, eps);
    let mut bounded = vec![true; count];
    for (idx, &l) in labels.iter().enumerate() {
        if l != 0 {
            let (i, j) = g.coords(idx);
            if g.on_edge(i, j) {
                bounded[l as usize - 1] = false;
            }
        }
    }
    let mut eigen_assignment = vec![Vec::new(); count];
    let mut eigen_labels = Vec::with_capacity(eigen.distinct_count());
    for (z, mult) in eigen.iter() {
        if !g.contains(z) {
            return Err(Error::EigenvalueOutsideWindow(z));
        }
        let l = label_at(field, &labels, z).ok_or(Error::GridTooCoarse {
            eigenvalue: z,
            epsilon: eps,
        })?;
        eigen_assignment[l as usize - 1].push((z, mult));
        eigen_labels.push(l);
    }
    Ok(ComponentReport {
        epsilon: eps,
        count,
        labels,
        eigen_assignment,
        bounded,
        eigen_labels,
    })
}

fn groups_joined(field: &ScalarField, eps: f64, a: &[Complex64], b: &[Complex64]) -> Result<bool> {
    let (labels, _) = label_sublevel(field, eps);
    let lookup = |z: Complex64| -> Result<u32> {
        if !field.grid.contains(z) {
            return Err(Error::EigenvalueOutsideWindow(z));
        }
        label_at(field, &labels, z).ok_or(Error::GridTooCoarse {
            eigenvalue: z,
            epsilon: eps,
        })
    };
    let la = a.iter().map(|&z| lookup(z)).collect::<Result<Vec<_>>>()?;
    let lb = b.iter().map(|&z| lookup(z)).collect::<Result<Vec<_>>>()?;
    Ok(la.iter().any(|l| lb.contains(l)))
}

/// Bisects on `ε` for the level at which the component holding `group_a`
/// first meets the one holding `group_b`. Requires them apart at `eps_lo` and
/// joined at `eps_hi`; returns the midpoint of the final bracket.
pub fn merge_epsilon(
    field: &ScalarField,
    group_a: &[Complex64],
    group_b: &[Complex64],
    eps_lo: f64,
    eps_hi: f64,
) -> Result<f64> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::Precondition("eigenvalue groups must be non-empty".into()));
    }
    if !(0.0 < eps_lo && eps_lo < eps_hi) {
        return Err(Error::Precondition(format!(
            "need 0 < eps_lo < eps_hi, got [{eps_lo}, {eps_hi}]"
        )));
    }
    if groups_joined(field, eps_lo, group_a, group_b)? {
        return Err(Error::Precondition(format!(
            "groups already share a component at eps_lo = {eps_lo}"
        )));
    }
    if !groups_joined(field, eps_hi, group_a, group_b)? {
        return Err(Error::Precondition(format!(
            "groups still apart at eps_hi = {eps_hi}"
        )));
    }
    let (mut lo, mut hi) = (eps_lo, eps_hi);
    let width = TAU_EPS_REL * eps_hi;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if groups_joined(field, mid, group_a, group_b)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Node at which the sublevel components of `group_a` and `group_b` first
/// join as `ε` grows, with the field value there (the grid merge level).
/// Found by activating nodes in increasing order of value.
pub fn merge_node(field: &ScalarField, group_a: &[Complex64], group_b: &[Complex64]) -> Option<(usize, f64)> {
    let g = &field.grid;
    let seeds = |pts: &[Complex64]| -> Vec<usize> {
        pts.iter()
            .filter_map(|&z| g.nearest(z).map(|(i, j)| g.index(i, j)))
            .collect()
    };
    let sa = seeds(group_a);
    let sb = seeds(group_b);
    if sa.is_empty() || sb.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| field.values[a].partial_cmp(&field.values[b]).unwrap().then(a.cmp(&b)));

    let mut parent: Vec<usize> = (0..g.len()).collect();
    let mut active = vec![false; g.len()];
    // bit 0: contains an A seed, bit 1: contains a B seed
    let mut flags = vec![0u8; g.len()];
    for &s in &sa {
        flags[s] |= 1;
    }
    for &s in &sb {
        flags[s] |= 2;
    }
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &idx in &order {
        active[idx] = true;
        let (i, j) = g.coords(idx);
        for (ni, nj) in g.neighbors8(i, j) {
            let nidx = g.index(ni, nj);
            if !active[nidx] {
                continue;
            }
            let ra = find(&mut parent, idx);
            let rb = find(&mut parent, nidx);
            if ra != rb {
                parent[rb] = ra;
                flags[ra] |= flags[rb];
            }
        }
        let r = find(&mut parent, idx);
        if flags[r] == 3 {
            return Some((idx, field.values[idx]));
        }
    }
    None
}
