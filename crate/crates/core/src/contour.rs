//! Zero-level contour extraction on a 2D grid.
//!
//! Edge crossings are located by bisection on fresh evaluations of the
//! underlying function (not by interpolating the stored node values), then
//! chained into polylines by marching through the cells. Nodes that are
//! exactly zero count as positive.

use std::collections::BTreeMap;

/// An ordered chain of (x, y) points tracing one connected piece of the
/// zero level set.
pub type Polyline = Vec<(f64, f64)>;

/// Edge identifiers on the node lattice. `Along0` runs between nodes
/// (i, j) and (i+1, j); `Along1` between (i, j) and (i, j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeId {
    Along0 { i: usize, j: usize },
    Along1 { i: usize, j: usize },
}

fn is_positive(v: f64) -> bool {
    // Exact zeros resolve as positive.
    v >= 0.0
}

/// Extract all zero contours of `eval` over the grid spanned by `xs` x `ys`
/// with precomputed node values (row-major, `values[i * ys.len() + j]`).
///
/// `tol` is the absolute |f| target for the bisection; pass something like
/// 1e-12 times the value scale of the grid.
pub fn extract_zero_contours<F>(
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    eval: F,
    tol: f64,
) -> Vec<Polyline>
where
    F: Fn(f64, f64) -> f64,
{
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "node values must cover the grid");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let at = |i: usize, j: usize| values[i * ny + j];

    // Locate one crossing point per sign-changing edge.
    let mut crossings: BTreeMap<EdgeId, (f64, f64)> = BTreeMap::new();
    for i in 0..nx {
        for j in 0..ny {
            if i + 1 < nx && is_positive(at(i, j)) != is_positive(at(i + 1, j)) {
                let x = bisect(|x| eval(x, ys[j]), xs[i], xs[i + 1], at(i, j), tol);
                crossings.insert(EdgeId::Along0 { i, j }, (x, ys[j]));
            }
            if j + 1 < ny && is_positive(at(i, j)) != is_positive(at(i, j + 1)) {
                let y = bisect(|y| eval(xs[i], y), ys[j], ys[j + 1], at(i, j), tol);
                crossings.insert(EdgeId::Along1 { i, j }, (xs[i], y));
            }
        }
    }

    // March cells, pairing crossed edges into segments.
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            let e_bottom = EdgeId::Along0 { i, j };
            let e_top = EdgeId::Along0 { i, j: j + 1 };
            let e_left = EdgeId::Along1 { i, j };
            let e_right = EdgeId::Along1 { i: i + 1, j };
            let crossed: Vec<EdgeId> = [e_bottom, e_top, e_left, e_right]
                .into_iter()
                .filter(|e| crossings.contains_key(e))
                .collect();
            match crossed.len() {
                0 => {}
                2 => segments.push((crossed[0], crossed[1])),
                4 => {
                    // Saddle cell: both diagonals alternate. Decide the
                    // pairing from a fresh sample at the cell centre.
                    let cx = 0.5 * (xs[i] + xs[i + 1]);
                    let cy = 0.5 * (ys[j] + ys[j + 1]);
                    let centre_positive = is_positive(eval(cx, cy));
                    let p00 = is_positive(at(i, j));
                    if centre_positive == p00 {
                        // Corners (i+1, j) and (i, j+1) are isolated islands.
                        segments.push((e_bottom, e_right));
                        segments.push((e_left, e_top));
                    } else {
                        segments.push((e_bottom, e_left));
                        segments.push((e_right, e_top));
                    }
                }
                n => unreachable!("cell with {n} crossed edges"),
            }
        }
    }

    chain_segments(&segments, &crossings)
}

/// Bisection for the sign change of `f` on [a, b], where the sign at `a`
/// matches `value_at_a`. Runs until |f| <= tol or the bracket collapses.
fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, value_at_a: f64, tol: f64) -> f64 {
    let mut lo = a;
    let mut hi = b;
    let lo_positive = is_positive(value_at_a);
    let span = (b - a).abs();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() <= tol || (hi - lo).abs() <= 1e-15 * span.max(1.0) {
            return mid;
        }
        if is_positive(v) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Join segments sharing edge crossings into open chains and closed loops.
fn chain_segments(
    segments: &[(EdgeId, EdgeId)],
    crossings: &BTreeMap<EdgeId, (f64, f64)>,
) -> Vec<Polyline> {
    let mut incident: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(idx);
        incident.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    // Open chains first (starting at degree-1 edges), then leftover loops.
    let starts: Vec<EdgeId> = incident
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    for start in starts {
        if let Some(line) = walk(start, segments, &incident, &mut used, crossings) {
            polylines.push(line);
        }
    }
    for idx in 0..segments.len() {
        if !used[idx] {
            if let Some(line) = walk(segments[idx].0, segments, &incident, &mut used, crossings) {
                polylines.push(line);
            }
        }
    }
    polylines
}

fn walk(
    start: EdgeId,
    segments: &[(EdgeId, EdgeId)],
    incident: &BTreeMap<EdgeId, Vec<usize>>,
    used: &mut [bool],
    crossings: &BTreeMap<EdgeId, (f64, f64)>,
) -> Option<Polyline> {
    let first = incident
        .get(&start)?
        .iter()
        .copied()
        .find(|&idx| !used[idx])?;
    let mut line = vec![crossings[&start]];
    let mut edge = start;
    let mut seg = first;
    loop {
        used[seg] = true;
        let (a, b) = segments[seg];
        edge = if a == edge { b } else { a };
        line.push(crossings[&edge]);
        match incident[&edge].iter().copied().find(|&idx| !used[idx]) {
            Some(next) => seg = next,
            None => break,
        }
    }
    Some(line)
}
