//! Fourier–Motzkin elimination for the handful of tiny linear programs the
//! crate needs (inradii and zonotope membership). Constraints are `a . x <= b`.

pub(crate) type Constraint = (Vec<f64>, f64);

const EPS: f64 = 1e-12;

fn normalise((a, b): Constraint) -> Constraint {
    let s = a.iter().fold(b.abs(), |m, x| m.max(x.abs()));
    if s > 0.0 {
        (a.iter().map(|x| x / s).collect(), b / s)
    } else {
        (a, b)
    }
}

/// Removes variable `j` (its coefficient becomes zero everywhere).
pub(crate) fn eliminate(constraints: Vec<Constraint>, j: usize) -> Vec<Constraint> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for c in constraints {
        if c.0[j] > EPS {
            pos.push(c);
        } else if c.0[j] < -EPS {
            neg.push(c);
        } else {
            let (mut a, b) = c;
            a[j] = 0.0;
            out.push((a, b));
        }
    }
    for (ap, bp) in &pos {
        for (an, bn) in &neg {
            let (wp, wn) = (-an[j], ap[j]);
            let mut a: Vec<f64> = ap.iter().zip(an).map(|(x, y)| wp * x + wn * y).collect();
            a[j] = 0.0;
            out.push(normalise((a, wp * bp + wn * bn)));
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    out.dedup_by(|x, y| x.1 == y.1 && x.0 == y.0);
    out
}

/// Is `{x : a . x <= b}` nonempty (up to `tol`)?
pub(crate) fn feasible(mut constraints: Vec<Constraint>, nvars: usize, tol: f64) -> bool {
    for j in 0..nvars {
        constraints = eliminate(constraints, j);
    }
    constraints.iter().all(|(_, b)| *b >= -tol)
}

/// Maximum of the last variable over the polyhedron; `None` if infeasible or
/// unbounded.
pub(crate) fn maximize_last(mut constraints: Vec<Constraint>, nvars: usize) -> Option<f64> {
    for j in 0..nvars - 1 {
        constraints = eliminate(constraints, j);
    }
    let last = nvars - 1;
    let mut hi = f64::INFINITY;
    let mut lo = f64::NEG_INFINITY;
    for (a, b) in &constraints {
        let c = a[last];
        if c > EPS {
            hi = hi.min(b / c);
        } else if c < -EPS {
            lo = lo.max(b / c);
        } else if *b < -1e-9 {
            return None;
        }
    }
    (hi.is_finite() && hi >= lo - 1e-9).then_some(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_inradius() {
        // x, y in [0, 2] shrunk by r: r <= x, x + r <= 2, same for y
        let cons = vec![
            (vec![-1.0, 0.0, 1.0], 0.0),
            (vec![1.0, 0.0, 1.0], 2.0),
            (vec![0.0, -1.0, 1.0], 0.0),
            (vec![0.0, 1.0, 1.0], 2.0),
        ];
        assert!((maximize_last(cons, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!(!feasible(vec![(vec![1.0], -1.0), (vec![-1.0], 0.0)], 1, 1e-12));
    }
}
