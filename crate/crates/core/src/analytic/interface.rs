//! Assembly of the per-mode interface system for a stack of concentric
//! regions `[r_0 = 0 or lo, r_1], [r_1, r_2], …, [r_{N-1}, R_ext]`.
//!
//! Each region carries two conductivities: `alpha` enters the volume equation
//! `-α Δu = f` (and hence the particular part), `flux_weight` multiplies `∂_r u`
//! in the flux condition. They coincide except for the lift, whose gradient
//! (not its flux) is continuous.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::geometry::FourierMode;
use crate::linalg::solve_dense;
use crate::radial::{particular_for_mode, RadialPiece};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub flux_weight: f64,
}

impl Region {
    pub fn new(lo: f64, hi: f64, alpha: f64) -> Self {
        Self {
            lo,
            hi,
            alpha,
            flux_weight: alpha,
        }
    }

    fn touches_origin(&self) -> bool {
        self.lo == 0.0
    }

    fn unknowns(&self) -> usize {
        if self.touches_origin() {
            1
        } else {
            2
        }
    }

    fn scales(&self) -> (f64, f64) {
        if self.touches_origin() {
            (self.hi, self.hi)
        } else {
            (self.hi, self.lo)
        }
    }
}

/// Jump data `c + v·u_L(ρ) + d·u_L'(ρ)` where `u_L` is the solution on the
/// inner side of the interface at radius `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Affine {
    pub constant: f64,
    pub on_value: f64,
    pub on_derivative: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }
}

/// `u_L - u_R = trace_jump` and `k_L u_L' - k_R u_R' = flux_jump`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterfaceJump {
    pub trace_jump: Affine,
    pub flux_jump: Affine,
}

impl InterfaceJump {
    pub fn continuous() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone)]
pub struct LayeredProblem<'a> {
    pub mode: FourierMode,
    pub regions: Vec<Region>,
    /// One entry per internal break, `regions[j].hi`.
    pub interfaces: Vec<InterfaceJump>,
    /// `None` for homogeneous problems.
    pub forcing: Option<&'a ForcingSpec>,
}

/// Summands of one condition evaluated on a candidate solution.
struct ConditionTerms {
    lhs: f64,
    rhs: f64,
    magnitude: f64,
}

impl ConditionTerms {
    fn relative_residual(&self) -> f64 {
        (self.lhs - self.rhs).abs() / (1.0 + self.magnitude)
    }
}

impl<'a> LayeredProblem<'a> {
    fn check(&self) -> Result<()> {
        if self.regions.is_empty() || self.interfaces.len() + 1 != self.regions.len() {
            return Err(Error::DegenerateGeometry(
                "need one interface between each pair of regions".into(),
            ));
        }
        for (k, reg) in self.regions.iter().enumerate() {
            if !(reg.lo >= 0.0 && reg.hi > reg.lo) {
                return Err(Error::DegenerateGeometry(format!(
                    "region {k} is [{}, {}]",
                    reg.lo, reg.hi
                )));
            }
            if k > 0 && reg.touches_origin() {
                return Err(Error::DegenerateGeometry(
                    "only the first region may touch the origin".into(),
                ));
            }
            if k + 1 < self.regions.len() && self.regions[k + 1].lo != reg.hi {
                return Err(Error::DegenerateGeometry(format!(
                    "regions {k} and {} do not share a break",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    fn particular_pieces(&self) -> Result<Vec<RadialPiece>> {
        self.regions
            .iter()
            .map(|reg| {
                let (g, d) = reg.scales();
                let mut piece = RadialPiece::zero(self.mode.n, g, d);
                if let Some(forcing) = self.forcing {
                    piece.particular = particular_for_mode(forcing, self.mode, reg.alpha)?;
                }
                Ok(piece)
            })
            .collect()
    }

    /// Solves for the homogeneous coefficients of every region.
    pub fn solve(&self) -> Result<Vec<RadialPiece>> {
        self.check()?;
        let n = self.mode.n;
        let mut pieces = self.particular_pieces()?;
        let offsets: Vec<usize> = self
            .regions
            .iter()
            .scan(0, |acc, reg| {
                let start = *acc;
                *acc += reg.unknowns();
                Some(start)
            })
            .collect();
        let size: usize = self.regions.iter().map(Region::unknowns).sum();
        let mut mat = DMatrix::<f64>::zeros(size, size);
        let mut rhs = DVector::<f64>::zeros(size);

        // Homogeneous basis values/derivatives of region k at radius rho,
        // restricted to its unknowns.
        let basis = |k: usize, rho: f64| -> Vec<(usize, f64, f64)> {
            let reg = &self.regions[k];
            let (g, d) = reg.scales();
            let (v_grow, v_decay) = RadialPiece::basis(n, g, d, rho);
            let (d_grow, d_decay) = RadialPiece::basis_derivative(n, g, d, rho);
            let mut cols = vec![(offsets[k], v_grow, d_grow)];
            if !reg.touches_origin() {
                cols.push((offsets[k] + 1, v_decay, d_decay));
            }
            cols
        };

        let mut row = 0;
        for (j, jump) in self.interfaces.iter().enumerate() {
            let rho = self.regions[j].hi;
            let (left, right) = (&self.regions[j], &self.regions[j + 1]);
            let (pl, pr) = (&pieces[j], &pieces[j + 1]);
            let (plv, pld) = particular_only(pl).value_and_derivative(rho);
            let (prv, prd) = particular_only(pr).value_and_derivative(rho);

            // trace: (1 - v) u_L - d u_L' - u_R = c
            let t = jump.trace_jump;
            for (col, v, dv) in basis(j, rho) {
                mat[(row, col)] += (1.0 - t.on_value) * v - t.on_derivative * dv;
            }
            for (col, v, _) in basis(j + 1, rho) {
                mat[(row, col)] -= v;
            }
            rhs[row] = t.constant - ((1.0 - t.on_value) * plv - t.on_derivative * pld - prv);
            row += 1;

            // flux: (k_L - d) u_L' - v u_L - k_R u_R' = c
            let q = jump.flux_jump;
            for (col, v, dv) in basis(j, rho) {
                mat[(row, col)] += (left.flux_weight - q.on_derivative) * dv - q.on_value * v;
            }
            for (col, _, dv) in basis(j + 1, rho) {
                mat[(row, col)] -= right.flux_weight * dv;
            }
            rhs[row] = q.constant
                - ((left.flux_weight - q.on_derivative) * pld
                    - q.on_value * plv
                    - right.flux_weight * prd);
            row += 1;
        }

        // homogeneous Dirichlet on the outer circle
        let last = self.regions.len() - 1;
        let r_ext = self.regions[last].hi;
        for (col, v, _) in basis(last, r_ext) {
            mat[(row, col)] = v;
        }
        rhs[row] = -particular_only(&pieces[last]).value(r_ext);

        let coeffs = solve_dense(mat, rhs).map_err(|e| {
            Error::DegenerateGeometry(format!("interface system for mode {}: {e}", self.mode))
        })?;
        for (k, piece) in pieces.iter_mut().enumerate() {
            piece.a = coeffs[offsets[k]];
            if !self.regions[k].touches_origin() {
                piece.b = coeffs[offsets[k] + 1];
            }
        }
        Ok(pieces)
    }

    fn condition_terms(&self, pieces: &[RadialPiece]) -> Vec<ConditionTerms> {
        let mut out = Vec::with_capacity(2 * self.interfaces.len() + 1);
        for (j, jump) in self.interfaces.iter().enumerate() {
            let rho = self.regions[j].hi;
            let (ul, dl) = pieces[j].value_and_derivative(rho);
            let (ur, dr) = pieces[j + 1].value_and_derivative(rho);
            let t = jump.trace_jump;
            let t_rhs = t.constant + t.on_value * ul + t.on_derivative * dl;
            out.push(ConditionTerms {
                lhs: ul - ur,
                rhs: t_rhs,
                magnitude: ul.abs().max(ur.abs()).max(t_rhs.abs()),
            });
            let q = jump.flux_jump;
            let (kl, kr) = (self.regions[j].flux_weight, self.regions[j + 1].flux_weight);
            let q_rhs = q.constant + q.on_value * ul + q.on_derivative * dl;
            out.push(ConditionTerms {
                lhs: kl * dl - kr * dr,
                rhs: q_rhs,
                magnitude: (kl * dl).abs().max((kr * dr).abs()).max(q_rhs.abs()),
            });
        }
        let last = pieces.len() - 1;
        let u = pieces[last].value(self.regions[last].hi);
        let scale = pieces[last].max_coefficient();
        out.push(ConditionTerms {
            lhs: u,
            rhs: 0.0,
            magnitude: scale,
        });
        out
    }

    /// Relative residual of every interface and boundary condition, in the
    /// order trace/flux per interface then the outer Dirichlet condition.
    pub fn residuals(&self, pieces: &[RadialPiece]) -> Vec<f64> {
        self.condition_terms(pieces)
            .iter()
            .map(ConditionTerms::relative_residual)
            .collect()
    }
}

fn particular_only(piece: &RadialPiece) -> RadialPiece {
    RadialPiece {
        a: 0.0,
        b: 0.0,
        ..piece.clone()
    }
}
