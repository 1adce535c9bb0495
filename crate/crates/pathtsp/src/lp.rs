//! Exact linear programming over rationals.
//!
//! Minimizes `c·x` subject to `Ax >= b` and box bounds `l <= x <= u`, with a
//! dense-tableau bounded-variable primal simplex. Pivot selection follows
//! Bland's rule (smallest eligible index enters, smallest-index tie-break on
//! leaving), which makes the solver deterministic and immune to cycling.
//!
//! When some row is unsatisfied at the initial point the solver runs a
//! phase-1 pass with artificial variables; otherwise it starts directly from
//! the surplus basis. All arithmetic is `BigRational`, so results are exact.

use crate::rat::Rat;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RowWidthMismatch { row: usize, found: usize, expected: usize },
    #[error("bounds have wrong length")]
    BoundWidthMismatch,
    #[error("variable {0} has lower bound above upper bound")]
    EmptyBox(usize),
}

/// `minimize objective · x` subject to `row · x >= rhs` for every row and
/// `lower <= x <= upper` componentwise.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Rat)>,
    pub lower: Vec<Rat>,
    pub upper: Vec<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal assignment; empty unless status is `Optimal`.
    pub values: Vec<Rat>,
    /// Optimal objective value; zero unless status is `Optimal`.
    pub objective: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Column {
    lower: Rat,
    upper: Option<Rat>,
    artificial: bool,
}

struct Tableau {
    cols: Vec<Column>,
    /// `num_rows x num_cols`, the current basis inverse applied to A.
    tab: Vec<Vec<Rat>>,
    /// Current value of the basic variable of each row.
    beta: Vec<Rat>,
    basis: Vec<usize>,
    state: Vec<VarState>,
}

enum StepOutcome {
    Optimal,
    Unbounded,
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.objective.len();
    if lp.lower.len() != n || lp.upper.len() != n {
        return Err(LpError::BoundWidthMismatch);
    }
    for (i, (coeffs, _)) in lp.rows.iter().enumerate() {
        if coeffs.len() != n {
            return Err(LpError::RowWidthMismatch { row: i, found: coeffs.len(), expected: n });
        }
    }
    let infeasible = LpSolution {
        status: LpStatus::Infeasible,
        values: Vec::new(),
        objective: Rat::zero(),
    };
    for j in 0..n {
        if lp.lower[j] > lp.upper[j] {
            return Ok(infeasible);
        }
    }

    let r = lp.rows.len();
    let mut cols: Vec<Column> = (0..n)
        .map(|j| Column {
            lower: lp.lower[j].clone(),
            upper: Some(lp.upper[j].clone()),
            artificial: false,
        })
        .collect();
    // one surplus per row: row·x - surplus = rhs, surplus >= 0
    for _ in 0..r {
        cols.push(Column { lower: Rat::zero(), upper: None, artificial: false });
    }

    // Initial nonbasic point: structural variables at their upper bounds.
    // For the cut relaxations solved here that point satisfies every row, so
    // the surplus basis is feasible and phase 1 is skipped entirely.
    let mut state: Vec<VarState> = (0..n).map(|_| VarState::AtUpper).collect();
    let surplus_at_upper: Vec<Rat> = (0..r)
        .map(|i| {
            let (coeffs, rhs) = &lp.rows[i];
            coeffs
                .iter()
                .zip(&lp.upper)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, u)| c * u)
                .fold(-rhs.clone(), |acc, term| acc + term)
        })
        .collect();

    let mut tab: Vec<Vec<Rat>>;
    let mut beta: Vec<Rat>;
    let mut basis: Vec<usize>;

    if surplus_at_upper.iter().all(|v| !v.is_negative()) {
        // surplus basic in every row; basis matrix is -I, so tab = -A
        tab = (0..r)
            .map(|i| {
                let mut row: Vec<Rat> = lp.rows[i].0.iter().map(|c| -c.clone()).collect();
                row.extend((0..r).map(|k| {
                    if k == i {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                }));
                row
            })
            .collect();
        beta = surplus_at_upper;
        basis = (0..r).map(|i| n + i).collect();
        for (i, &b) in basis.iter().enumerate() {
            state.push(VarState::AtLower); // placeholder, fixed below
            state[b] = VarState::Basic(i);
        }
    } else {
        // Phase 1 from the all-lower point with one artificial per
        // unsatisfied row. Satisfied rows keep their surplus basic.
        for st in state.iter_mut() {
            *st = VarState::AtLower;
        }
        state.extend((0..r).map(|_| VarState::AtLower));
        let residual: Vec<Rat> = (0..r)
            .map(|i| {
                let (coeffs, rhs) = &lp.rows[i];
                coeffs
                    .iter()
                    .zip(&lp.lower)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| c * l)
                    .fold(-rhs.clone(), |acc, term| acc + term)
            })
            .collect();
        // Full rows with surplus columns. The basis matrix is diagonal:
        // -1 where a surplus is basic (its coefficient is -1), +1 where an
        // artificial is basic, so B^-1 A means negating the surplus rows.
        tab = (0..r)
            .map(|i| {
                let mut row: Vec<Rat> = lp.rows[i].0.to_vec();
                row.extend((0..r).map(|k| {
                    if k == i {
                        -Rat::one()
                    } else {
                        Rat::zero()
                    }
                }));
                row
            })
            .collect();
        beta = vec![Rat::zero(); r];
        basis = vec![usize::MAX; r];
        for i in 0..r {
            if residual[i].is_negative() {
                // artificial a_i with coefficient +1 carries the deficit
                beta[i] = -residual[i].clone();
            } else {
                for entry in tab[i].iter_mut() {
                    *entry = -entry.clone();
                }
                state[n + i] = VarState::Basic(i);
                basis[i] = n + i;
                beta[i] = residual[i].clone();
            }
        }
        let mut num_cols = n + r;
        for i in 0..r {
            if residual[i].is_negative() {
                for (k, row) in tab.iter_mut().enumerate() {
                    row.push(if k == i { Rat::one() } else { Rat::zero() });
                }
                cols.push(Column { lower: Rat::zero(), upper: None, artificial: true });
                state.push(VarState::Basic(i));
                basis[i] = num_cols;
                num_cols += 1;
            }
        }
        let mut t = Tableau { cols, tab, beta, basis, state };
        let phase1_cost: Vec<Rat> = (0..t.cols.len())
            .map(|j| if t.cols[j].artificial { Rat::one() } else { Rat::zero() })
            .collect();
        t.run(&phase1_cost);
        let infeasibility: Rat = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| t.cols[b].artificial)
            .map(|(i, _)| t.beta[i].clone())
            .fold(Rat::zero(), |acc, v| acc + v);
        if infeasibility.is_positive() {
            return Ok(infeasible);
        }
        // Pin artificials at zero for phase 2. Basic ones sit at value zero
        // and can never move; nonbasic ones are excluded from entering.
        for col in t.cols.iter_mut().filter(|c| c.artificial) {
            col.upper = Some(Rat::zero());
        }
        return Ok(finish(t, lp, n));
    }

    let t = Tableau { cols, tab, beta, basis, state };
    Ok(finish(t, lp, n))
}

fn finish(mut t: Tableau, lp: &LinearProgram, n: usize) -> LpSolution {
    let mut cost: Vec<Rat> = lp.objective.clone();
    cost.resize(t.cols.len(), Rat::zero());
    match t.run(&cost) {
        StepOutcome::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: Rat::zero(),
        },
        StepOutcome::Optimal => {
            let values: Vec<Rat> = (0..n).map(|j| t.value_of(j)).collect();
            let objective = lp
                .objective
                .iter()
                .zip(&values)
                .map(|(c, v)| c * v)
                .fold(Rat::zero(), |acc, term| acc + term);
            LpSolution { status: LpStatus::Optimal, values, objective }
        }
    }
}

impl Tableau {
    fn value_of(&self, j: usize) -> Rat {
        match self.state[j] {
            VarState::Basic(i) => self.beta[i].clone(),
            VarState::AtLower => self.cols[j].lower.clone(),
            VarState::AtUpper => self.cols[j].upper.clone().unwrap(),
        }
    }

    /// Runs primal simplex iterations until optimality or unboundedness for
    /// the given cost vector.
    fn run(&mut self, cost: &[Rat]) -> StepOutcome {
        // reduced costs, kept in sync across pivots
        let mut rc: Vec<Rat> = (0..self.cols.len())
            .map(|j| {
                let mut v = cost[j].clone();
                for i in 0..self.tab.len() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !self.tab[i][j].is_zero() {
                        v -= cb * &self.tab[i][j];
                    }
                }
                v
            })
            .collect();

        loop {
            // Bland: smallest eligible nonbasic index enters
            let mut entering = None;
            for j in 0..self.cols.len() {
                if self.cols[j].artificial {
                    continue;
                }
                let eligible = match self.state[j] {
                    VarState::Basic(_) => false,
                    VarState::AtLower => rc[j].is_negative(),
                    VarState::AtUpper => rc[j].is_positive(),
                };
                if eligible {
                    // fixed variables can never move
                    if let Some(u) = &self.cols[j].upper {
                        if *u == self.cols[j].lower {
                            continue;
                        }
                    }
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return StepOutcome::Optimal;
            };
            let increasing = matches!(self.state[j], VarState::AtLower);

            // Ratio test: the entering variable moves by delta >= 0; each
            // basic variable must stay inside its box, and the entering
            // variable may at most flip to its other bound.
            // candidate: (delta, variable index, kind)
            enum Leave {
                Flip,
                Row(usize),
            }
            let mut best: Option<(Rat, usize, Leave)> = None;
            if let Some(u) = &self.cols[j].upper {
                let span = u - &self.cols[j].lower;
                best = Some((span, j, Leave::Flip));
            }
            for i in 0..self.tab.len() {
                let a = &self.tab[i][j];
                if a.is_zero() {
                    continue;
                }
                // basic value moves by -dir * a * delta
                let decreasing_basic = if increasing { a.is_positive() } else { a.is_negative() };
                let b = self.basis[i];
                let room = if decreasing_basic {
                    &self.beta[i] - &self.cols[b].lower
                } else {
                    match &self.cols[b].upper {
                        Some(u) => u - &self.beta[i],
                        None => continue,
                    }
                };
                let rate = if a.is_negative() { -a.clone() } else { a.clone() };
                let delta = room / rate;
                let replace = match &best {
                    None => true,
                    Some((d, v, _)) => delta < *d || (delta == *d && b < *v),
                };
                if replace {
                    best = Some((delta, b, Leave::Row(i)));
                }
            }

            match best {
                None => return StepOutcome::Unbounded,
                Some((delta, _, Leave::Flip)) => {
                    let dir = if increasing { Rat::one() } else { -Rat::one() };
                    let step = &dir * &delta;
                    for i in 0..self.tab.len() {
                        if !self.tab[i][j].is_zero() {
                            let move_amt = &self.tab[i][j] * &step;
                            self.beta[i] -= move_amt;
                        }
                    }
                    self.state[j] = if increasing { VarState::AtUpper } else { VarState::AtLower };
                }
                Some((delta, _, Leave::Row(row))) => {
                    let dir = if increasing { Rat::one() } else { -Rat::one() };
                    let step = &dir * &delta;
                    let entering_value = self.value_of(j) + &step;
                    for i in 0..self.tab.len() {
                        if i != row && !self.tab[i][j].is_zero() {
                            let move_amt = &self.tab[i][j] * &step;
                            self.beta[i] -= move_amt;
                        }
                    }
                    let leaving = self.basis[row];
                    let a = self.tab[row][j].clone();
                    // leaving variable lands on the bound it was pushed toward
                    let to_lower = if increasing { a.is_positive() } else { a.is_negative() };
                    self.state[leaving] =
                        if to_lower { VarState::AtLower } else { VarState::AtUpper };

                    // pivot: normalize row, eliminate column j elsewhere
                    let inv = Rat::one() / &a;
                    for entry in self.tab[row].iter_mut() {
                        if !entry.is_zero() {
                            *entry = &*entry * &inv;
                        }
                    }
                    let pivot_row = std::mem::take(&mut self.tab[row]);
                    for i in 0..self.tab.len() {
                        if i == row {
                            continue;
                        }
                        let f = self.tab[i][j].clone();
                        if f.is_zero() {
                            continue;
                        }
                        for (entry, p) in self.tab[i].iter_mut().zip(&pivot_row) {
                            if !p.is_zero() {
                                *entry = &*entry - &(&f * p);
                            }
                        }
                    }
                    self.tab[row] = pivot_row;
                    let f = rc[j].clone();
                    if !f.is_zero() {
                        for (entry, p) in rc.iter_mut().zip(&self.tab[row]) {
                            if !p.is_zero() {
                                *entry = &*entry - &(&f * p);
                            }
                        }
                    }
                    self.basis[row] = j;
                    self.state[j] = VarState::Basic(row);
                    self.beta[row] = entering_value;
                }
            }
        }
    }
}
