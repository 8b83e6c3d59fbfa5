//! Coupling-matrix refinement by derivative-free minimization of a scalar
//! cost: |S11| at the target reflection zeros plus equiripple matching at
//! the band edges.

mod nelder_mead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::prototype::{ripple_beta, FilterSpec};
use crate::response::s_parameters;
use crate::scalar::{imag, Scalar};

/// A matrix entry or loading slot the optimizer may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeParameter {
    /// `m_ij` (and `m_ji`), stored with `i <= j`.
    Coupling(usize, usize),
    Qe1,
    Qen,
}

impl FreeParameter {
    pub fn coupling(i: usize, j: usize) -> Self {
        Self::Coupling(i.min(j), i.max(j))
    }

    fn mirror(self, n: usize) -> Self {
        match self {
            Self::Coupling(i, j) => Self::coupling(n - 1 - j, n - 1 - i),
            Self::Qe1 => Self::Qen,
            Self::Qen => Self::Qe1,
        }
    }

    fn get<T: Scalar>(self, cm: &CouplingMatrix<T>) -> T {
        match self {
            Self::Coupling(i, j) => cm.get(i, j),
            Self::Qe1 => cm.qe1(),
            Self::Qen => cm.qen(),
        }
    }

    fn set<T: Scalar>(self, cm: &mut CouplingMatrix<T>, v: T) -> Result<()> {
        match self {
            Self::Coupling(i, j) => {
                cm.set(i, j, v);
                Ok(())
            }
            Self::Qe1 => cm.set_qe1(v),
            Self::Qen => cm.set_qen(v),
        }
    }
}

/// Target reflection-zero positions and band-edge reflection level, in the
/// normalized frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CostConfig<T> {
    pub reflection_zeros: Vec<T>,
    pub edge_level: T,
}

impl<T: Scalar> CostConfig<T> {
    /// Chebyshev targets: zeros at `cos((2i−1)π/2n)` and edge reflection
    /// `ε/√(1+ε²) = 1/cosh(β/2)`, with `β` taken from the g-value formulas so
    /// that the synthesized prototype sits at zero cost.
    pub fn chebyshev(order: usize, ripple_db: T) -> Self {
        let n = T::of_usize(order);
        let zeros = (1..=order)
            .map(|i| ((T::of(2.0) * T::of_usize(i) - T::one()) * T::PI() / (T::of(2.0) * n)).cos())
            .collect();
        Self {
            reflection_zeros: zeros,
            edge_level: T::one() / (ripple_beta(ripple_db) / T::of(2.0)).cosh(),
        }
    }

    pub fn from_spec(spec: &FilterSpec<T>) -> Self {
        Self::chebyshev(spec.order, spec.ripple_db)
    }
}

/// Sum of squared |S11| at the target zeros plus squared band-edge
/// deviations. Frequencies where the model is singular cost `+∞`.
pub fn cost<T: Scalar>(cm: &CouplingMatrix<T>, config: &CostConfig<T>) -> T {
    let s11 = |w: T| s_parameters(cm, imag(w)).map(|(s11, _)| s11.norm());
    let eval = || -> Result<T> {
        let mut c = T::zero();
        for &w in &config.reflection_zeros {
            let r = s11(w)?;
            c = c + r * r;
        }
        for w in [T::one(), -T::one()] {
            let d = s11(w)? - config.edge_level;
            c = c + d * d;
        }
        Ok(c)
    };
    eval().unwrap_or(T::infinity())
}

/// Search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Cyclic one-parameter-at-a-time sweep with step halving.
    #[default]
    CoordinateDescent,
    NelderMead,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationProblem<T: Scalar> {
    pub initial: CouplingMatrix<T>,
    pub spec: FilterSpec<T>,
    pub free_parameters: Vec<FreeParameter>,
    pub cost_config: CostConfig<T>,
}

impl<T: Scalar> OptimizationProblem<T> {
    /// Chebyshev targets from `spec`; the mainline couplings and both
    /// external Q values are free.
    pub fn new(initial: CouplingMatrix<T>, spec: FilterSpec<T>) -> Result<Self> {
        spec.validate()?;
        if initial.order() != spec.order {
            return Err(invalid(format!(
                "matrix order {} does not match spec order {}",
                initial.order(),
                spec.order
            )));
        }
        let n = initial.order();
        let mut free: Vec<FreeParameter> =
            (0..n - 1).map(|i| FreeParameter::coupling(i, i + 1)).collect();
        free.push(FreeParameter::Qe1);
        free.push(FreeParameter::Qen);
        Ok(Self {
            cost_config: CostConfig::from_spec(&spec),
            initial,
            spec,
            free_parameters: free,
        })
    }

    pub fn with_free_parameters(mut self, free: Vec<FreeParameter>) -> Result<Self> {
        let n = self.initial.order();
        for p in &free {
            if let FreeParameter::Coupling(i, j) = *p {
                if j >= n {
                    return Err(invalid(format!("free coupling ({i}, {j}) outside {n}x{n} matrix")));
                }
            }
        }
        self.free_parameters = free;
        Ok(self)
    }

    /// Free parameters grouped into jointly moving sets. Mirror-image
    /// parameters are tied when the start matrix and free set are both
    /// palindromic.
    fn groups(&self) -> Vec<Vec<FreeParameter>> {
        let n = self.initial.order();
        let mut free = self.free_parameters.clone();
        free.sort();
        free.dedup();
        let palindromic = is_palindromic(&self.initial)
            && free.iter().all(|p| free.contains(&p.mirror(n)));
        let mut groups: Vec<Vec<FreeParameter>> = Vec::new();
        for p in free {
            if palindromic {
                let mirror = p.mirror(n);
                if groups.iter().any(|g| g.contains(&p)) {
                    continue;
                }
                if mirror != p {
                    groups.push(vec![p, mirror]);
                    continue;
                }
            }
            groups.push(vec![p]);
        }
        groups
    }
}

/// Mirror symmetric up to a few ulps of the largest entry.
fn is_palindromic<T: Scalar>(cm: &CouplingMatrix<T>) -> bool {
    let n = cm.order();
    let rev = cm.reversed();
    let scale = cm
        .rows()
        .iter()
        .flatten()
        .fold(cm.qe1().max(cm.qen()), |a, &b| a.max(b.abs()));
    let tol = T::of(16.0) * T::epsilon() * scale;
    (cm.qe1() - cm.qen()).abs() <= tol
        && (0..n).all(|i| (0..n).all(|j| (cm.get(i, j) - rev.get(i, j)).abs() <= tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions<T> {
    pub max_iter: usize,
    /// Stop once the cost drops below this.
    pub tol: T,
    /// Starting step as a fraction of each parameter's magnitude.
    pub initial_step: T,
    /// Step used for parameters that start at zero.
    pub zero_step: T,
    /// Stop once every step falls below this fraction of its parameter.
    pub step_floor: T,
    pub method: Method,
}

impl<T: Scalar> Default for OptimizerOptions<T> {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            tol: T::of(1e-10),
            initial_step: T::of(0.05),
            zero_step: T::of(0.01),
            step_floor: T::of(1e-9),
            method: Method::CoordinateDescent,
        }
    }
}

/// One line of the iteration log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    pub cost: T,
    pub max_step: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T: Scalar> {
    pub final_matrix: CouplingMatrix<T>,
    pub initial_cost: T,
    pub final_cost: T,
    pub iterations: usize,
    pub converged: bool,
    /// Accepted cost after each iteration.
    pub history: Vec<T>,
}

/// Minimizes the cost with default options apart from `max_iter` and `tol`.
pub fn optimize<T: Scalar>(
    problem: &OptimizationProblem<T>,
    max_iter: usize,
    tol: T,
) -> Result<OptimizationResult<T>> {
    let options = OptimizerOptions {
        max_iter,
        tol,
        ..OptimizerOptions::default()
    };
    optimize_with(problem, &options, |_| {})
}

/// Minimizes the cost, reporting every iteration to `observer`.
pub fn optimize_with<T: Scalar>(
    problem: &OptimizationProblem<T>,
    options: &OptimizerOptions<T>,
    observer: impl FnMut(&IterationRecord<T>),
) -> Result<OptimizationResult<T>> {
    if options.max_iter == 0 {
        return Err(invalid("max_iter must be at least 1"));
    }
    if problem.free_parameters.is_empty() {
        return Err(invalid("no free parameters to optimize"));
    }
    let objective = Objective {
        base: problem.initial.clone(),
        groups: problem.groups(),
        config: &problem.cost_config,
    };
    let x0 = objective.start();
    let c0 = objective.eval(&x0);
    if !c0.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "cost is {c0} at the starting point; the model cannot be evaluated there"
        )));
    }
    match options.method {
        Method::CoordinateDescent => coordinate_descent(&objective, x0, c0, options, observer),
        Method::NelderMead => nelder_mead::minimize(&objective, x0, c0, options, observer),
    }
}

pub(crate) struct Objective<'a, T: Scalar> {
    base: CouplingMatrix<T>,
    groups: Vec<Vec<FreeParameter>>,
    config: &'a CostConfig<T>,
}

impl<T: Scalar> Objective<'_, T> {
    fn start(&self) -> Vec<T> {
        self.groups.iter().map(|g| g[0].get(&self.base)).collect()
    }

    fn matrix(&self, x: &[T]) -> Result<CouplingMatrix<T>> {
        let mut cm = self.base.clone();
        for (g, &v) in self.groups.iter().zip(x) {
            for p in g {
                p.set(&mut cm, v)?;
            }
        }
        Ok(cm)
    }

    pub(crate) fn eval(&self, x: &[T]) -> T {
        match self.matrix(x) {
            Ok(cm) => cost(&cm, self.config),
            Err(_) => T::infinity(),
        }
    }

    pub(crate) fn finish(
        &self,
        x: &[T],
        initial_cost: T,
        final_cost: T,
        iterations: usize,
        converged: bool,
        history: Vec<T>,
    ) -> Result<OptimizationResult<T>> {
        Ok(OptimizationResult {
            final_matrix: self.matrix(x)?,
            initial_cost,
            final_cost,
            iterations,
            converged,
            history,
        })
    }
}

fn coordinate_descent<T: Scalar>(
    objective: &Objective<'_, T>,
    mut x: Vec<T>,
    initial_cost: T,
    options: &OptimizerOptions<T>,
    mut observer: impl FnMut(&IterationRecord<T>),
) -> Result<OptimizationResult<T>> {
    let mut c = initial_cost;
    if c < options.tol {
        return objective.finish(&x, initial_cost, c, 0, true, Vec::new());
    }
    let mut steps: Vec<T> = x
        .iter()
        .map(|&v| {
            if v == T::zero() {
                options.zero_step
            } else {
                options.initial_step * v.abs()
            }
        })
        .collect();
    let grow = T::of(1.5);
    let half = T::of(0.5);
    let mut history = Vec::new();

    for iteration in 1..=options.max_iter {
        let sweep_start = x.clone();
        let mut max_step = T::zero();
        for g in 0..x.len() {
            let mut moved = false;
            for dir in [T::one(), -T::one()] {
                let mut trial = x.clone();
                trial[g] = x[g] + dir * steps[g];
                let ct = objective.eval(&trial);
                if ct.is_nan() {
                    return Err(Error::NumericalFailure(format!(
                        "cost is NaN at iteration {iteration}"
                    )));
                }
                if ct < c {
                    max_step = max_step.max(steps[g]);
                    x = trial;
                    c = ct;
                    moved = true;
                    break;
                }
            }
            steps[g] = if moved { steps[g] * grow } else { steps[g] * half };
        }

        // pattern move along the net displacement of this sweep
        if x != sweep_start {
            let trial: Vec<T> = x
                .iter()
                .zip(&sweep_start)
                .map(|(&a, &b)| a + (a - b))
                .collect();
            let ct = objective.eval(&trial);
            if ct < c {
                let jump = trial
                    .iter()
                    .zip(&x)
                    .map(|(&a, &b)| (a - b).abs())
                    .fold(T::zero(), T::max);
                max_step = max_step.max(jump);
                x = trial;
                c = ct;
            }
        }

        history.push(c);
        observer(&IterationRecord {
            iteration,
            cost: c,
            max_step,
        });
        if c < options.tol {
            return objective.finish(&x, initial_cost, c, iteration, true, history);
        }
        let floor_reached = steps
            .iter()
            .zip(&x)
            .all(|(&s, &v)| s <= options.step_floor * v.abs().max(options.zero_step));
        if floor_reached {
            return objective.finish(&x, initial_cost, c, iteration, true, history);
        }
    }
    objective.finish(&x, initial_cost, c, options.max_iter, false, history)
}

/// Scales every mainline coupling by `1 ± fraction`, signs drawn from a
/// seeded generator.
pub fn perturb_couplings<T: Scalar>(
    cm: &CouplingMatrix<T>,
    fraction: T,
    seed: u64,
) -> CouplingMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = cm.clone();
    for i in 0..cm.order().saturating_sub(1) {
        let sign = if rng.gen::<bool>() { T::one() } else { -T::one() };
        out.set(i, i + 1, cm.get(i, i + 1) * (T::one() + sign * fraction));
    }
    out
}
