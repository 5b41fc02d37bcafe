//! Derivative-free simplex minimization over the complex plane.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub point: Complex64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `start` with an initial simplex of size `scale`.
/// Stops after `max_iter` iterations or once the simplex has collapsed to
/// floating-point resolution.
pub fn minimize<F>(f: F, start: Complex64, scale: f64, max_iter: usize) -> Minimum
where
    F: Fn(Complex64) -> f64,
{
    let mut simplex = [
        start,
        start + Complex64::new(scale, 0.0),
        start + Complex64::new(0.0, scale),
    ];
    let mut values = simplex.map(&f);
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let (best, mid, worst) = (order[0], order[1], order[2]);

        let size = (simplex[worst] - simplex[best])
            .norm()
            .max((simplex[mid] - simplex[best]).norm());
        if size <= 4.0 * f64::EPSILON * (1.0 + simplex[best].norm()) {
            break;
        }

        let centroid = (simplex[best] + simplex[mid]) * 0.5;
        let reflected = centroid + (centroid - simplex[worst]);
        let fr = f(reflected);
        if fr < values[best] {
            let expanded = centroid + (centroid - simplex[worst]) * 2.0;
            let fe = f(expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[mid] {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[worst] {
            let c = centroid + (reflected - centroid) * 0.5;
            (c, f(c))
        } else {
            let c = centroid + (simplex[worst] - centroid) * 0.5;
            (c, f(c))
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        for k in [mid, worst] {
            simplex[k] = simplex[best] + (simplex[k] - simplex[best]) * 0.5;
            values[k] = f(simplex[k]);
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    Minimum {
        point: simplex[best],
        value: values[best],
        iterations,
    }
}
