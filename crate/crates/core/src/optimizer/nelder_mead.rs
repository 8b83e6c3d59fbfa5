//! Downhill simplex search over the grouped free parameters.

use super::{IterationRecord, Objective, OptimizationResult, OptimizerOptions};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(super) fn minimize<T: Scalar>(
    objective: &Objective<'_, T>,
    x0: Vec<T>,
    initial_cost: T,
    options: &OptimizerOptions<T>,
    mut observer: impl FnMut(&IterationRecord<T>),
) -> Result<OptimizationResult<T>> {
    if initial_cost < options.tol {
        return objective.finish(&x0, initial_cost, initial_cost, 0, true, Vec::new());
    }
    let dim = x0.len();
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.clone(), initial_cost));
    for i in 0..dim {
        let mut v = x0.clone();
        v[i] = if v[i] == T::zero() {
            options.zero_step
        } else {
            v[i] * (T::one() + options.initial_step)
        };
        let c = objective.eval(&v);
        simplex.push((v, c));
    }

    let (alpha, gamma, rho, sigma) = (T::one(), T::of(2.0), T::of(0.5), T::of(0.5));
    let mut history = Vec::new();
    let order = |s: &mut Vec<(Vec<T>, T)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };

    for iteration in 1..=options.max_iter {
        order(&mut simplex);
        if simplex.iter().any(|(_, c)| c.is_nan()) {
            return Err(Error::NumericalFailure(format!(
                "cost is NaN at iteration {iteration}"
            )));
        }
        let best = simplex[0].1;
        let worst = simplex[dim].clone();
        let centroid: Vec<T> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(v, _)| v[j]).sum::<T>() / T::of_usize(dim))
            .collect();
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let cr = objective.eval(&xr);
        if cr < best {
            let xe = along(gamma);
            let ce = objective.eval(&xe);
            simplex[dim] = if ce < cr { (xe, ce) } else { (xr, cr) };
        } else if cr < simplex[dim - 1].1 {
            simplex[dim] = (xr, cr);
        } else {
            let xc = along(-rho);
            let cc = objective.eval(&xc);
            if cc < worst.1 {
                simplex[dim] = (xc, cc);
            } else {
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v: Vec<T> = anchor
                        .iter()
                        .zip(&entry.0)
                        .map(|(&a, &b)| a + sigma * (b - a))
                        .collect();
                    let c = objective.eval(&v);
                    *entry = (v, c);
                }
            }
        }
        order(&mut simplex);
        let c = simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(&a, &b)| (a - b).abs()))
            .fold(T::zero(), T::max);
        history.push(c);
        observer(&IterationRecord {
            iteration,
            cost: c,
            max_step: size,
        });
        let scale = simplex[0]
            .0
            .iter()
            .map(|v| v.abs())
            .fold(options.zero_step, T::max);
        if c < options.tol || size <= options.step_floor * scale {
            let x = simplex[0].0.clone();
            return objective.finish(&x, initial_cost, c, iteration, true, history);
        }
    }
    let x = simplex[0].0.clone();
    let c = simplex[0].1;
    objective.finish(&x, initial_cost, c, options.max_iter, false, history)
}
