//! Products, orthogonal sums and the zero object.
//!
//! Only finite families are supported. The product `∏ A_i` concatenates
//! block lists, so its coordinates are the concatenation of the factors'
//! coordinates and the projections/injections are coordinate selections.

use nalgebra::DMatrix;

use crate::algebra::WStarAlgebra;
use crate::error::{Error, Result};
use crate::morphism::{compose, Counts, MultiplicityData, StarHom, VERIFY_TOL};
use crate::CMatrix;

/// Default tolerance for the orthogonality precondition of
/// [`ProductStructure::orthogonal_sum_mediator`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// `∏ A_i` with canonical projections `p_i` and injections `s_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductStructure {
    factors: Vec<WStarAlgebra>,
    product: WStarAlgebra,
    projections: Vec<StarHom>,
    injections: Vec<StarHom>,
}

pub fn product(algebras: &[WStarAlgebra]) -> ProductStructure {
    let sizes: Vec<usize> = algebras.iter().flat_map(|a| a.sizes().iter().copied()).collect();
    let prod = WStarAlgebra::from_sizes(&sizes).expect("factor sizes are positive");
    let total_blocks = prod.num_blocks();

    let mut projections = Vec::with_capacity(algebras.len());
    let mut injections = Vec::with_capacity(algebras.len());
    let mut first_block = 0;
    for a in algebras {
        let k = a.num_blocks();
        let mut p_counts = Counts::zeros(k, total_blocks);
        let mut s_counts = Counts::zeros(total_blocks, k);
        for b in 0..k {
            p_counts.0[b][first_block + b] = 1;
            s_counts.0[first_block + b][b] = 1;
        }
        projections.push(
            StarHom::from_multiplicity(&prod, a, &MultiplicityData::with_identity_unitaries(p_counts, a))
                .expect("one copy per block fits"),
        );
        injections.push(
            StarHom::from_multiplicity(a, &prod, &MultiplicityData::with_identity_unitaries(s_counts, &prod))
                .expect("one copy per block fits"),
        );
        first_block += k;
    }
    ProductStructure {
        factors: algebras.to_vec(),
        product: prod,
        projections,
        injections,
    }
}

impl ProductStructure {
    pub fn factors(&self) -> &[WStarAlgebra] {
        &self.factors
    }

    pub fn product(&self) -> &WStarAlgebra {
        &self.product
    }

    pub fn projections(&self) -> &[StarHom] {
        &self.projections
    }

    pub fn injections(&self) -> &[StarHom] {
        &self.injections
    }

    fn check_family(&self, maps: &[StarHom]) -> Result<()> {
        if maps.len() != self.factors.len() {
            return Err(Error::ObjectMismatch(format!(
                "{} maps for a product of {} factors",
                maps.len(),
                self.factors.len()
            )));
        }
        Ok(())
    }

    /// `u: B → ∏ A_i`, `u(b) = (u_i(b))_i`.
    pub fn product_mediator(&self, source: &WStarAlgebra, maps: &[StarHom]) -> Result<StarHom> {
        self.check_family(maps)?;
        let mut map = CMatrix::zeros(self.product.dim(), source.dim());
        let mut row = 0;
        for (i, (u, a)) in maps.iter().zip(&self.factors).enumerate() {
            if u.source() != source || u.target() != a {
                return Err(Error::ObjectMismatch(format!(
                    "map {i} goes {:?} -> {:?}, expected {:?} -> {:?}",
                    u.source().sizes(),
                    u.target().sizes(),
                    source.sizes(),
                    a.sizes()
                )));
            }
            map.view_mut((row, 0), (a.dim(), source.dim())).copy_from(u.matrix());
            row += a.dim();
        }
        let verified = maps.iter().all(StarHom::is_verified);
        Ok(StarHom::from_matrix(source.clone(), self.product.clone(), map)?.mark_verified(verified))
    }

    /// `u: ∏ A_i → B`, `u((a_i)) = Σ_i u_i(a_i)`, for a family with pairwise
    /// orthogonal ranges. The result is re-verified at [`VERIFY_TOL`], so
    /// passing `tol = f64::INFINITY` to skip the precondition yields an
    /// unverified map whenever the ranges actually overlap.
    pub fn orthogonal_sum_mediator(&self, target: &WStarAlgebra, maps: &[StarHom], tol: f64) -> Result<StarHom> {
        self.check_family(maps)?;
        for (i, (u, a)) in maps.iter().zip(&self.factors).enumerate() {
            if u.target() != target || u.source() != a {
                return Err(Error::ObjectMismatch(format!(
                    "map {i} goes {:?} -> {:?}, expected {:?} -> {:?}",
                    u.source().sizes(),
                    u.target().sizes(),
                    a.sizes(),
                    target.sizes()
                )));
            }
        }
        if let Some(err) = orthogonality_violation(maps, tol) {
            return Err(err);
        }
        let mut map = CMatrix::zeros(target.dim(), self.product.dim());
        let mut col = 0;
        for u in maps {
            let d = u.source().dim();
            map.view_mut((0, col), (target.dim(), d)).copy_from(u.matrix());
            col += d;
        }
        let sum = StarHom::from_matrix(self.product.clone(), target.clone(), map)?;
        let (sum, _) = sum.verify(VERIFY_TOL);
        Ok(sum)
    }
}

/// First basis pair `(i, p), (j, q)` with `i ≠ j` and
/// `‖u_i(e_p) u_j(e_q)‖ > tol`, as an error.
fn orthogonality_violation(maps: &[StarHom], tol: f64) -> Option<Error> {
    let images: Vec<_> = maps.iter().map(StarHom::basis_images).collect();
    for (i, ai) in images.iter().enumerate() {
        for (j, aj) in images.iter().enumerate() {
            if i == j {
                continue;
            }
            for (p, x) in ai.iter().enumerate() {
                for (q, y) in aj.iter().enumerate() {
                    let magnitude = x.mul(y).expect("shared target").block_frobenius();
                    if !(magnitude <= tol) {
                        return Some(Error::RangesNotOrthogonal {
                            left_map: i,
                            left_basis: p,
                            right_map: j,
                            right_basis: q,
                            magnitude,
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn zero_object() -> WStarAlgebra {
    WStarAlgebra::zero_algebra()
}

/// The only morphism `A → O`.
pub fn unique_to_zero(a: &WStarAlgebra) -> StarHom {
    StarHom::zero_hom(a, &zero_object())
}

/// The only morphism `O → A`.
pub fn unique_from_zero(a: &WStarAlgebra) -> StarHom {
    StarHom::zero_hom(&zero_object(), a)
}

/// `0_{A,B} = (O → B) ∘ (A → O)`.
pub fn zero_morphism(a: &WStarAlgebra, b: &WStarAlgebra) -> StarHom {
    compose(&unique_from_zero(b), &unique_to_zero(a)).expect("composable through O")
}

/// `‖Σ_i s_i ∘ p_i − id‖` and `max_{i,j} ‖p_i ∘ s_j − δ_ij‖` on the basis.
pub fn projection_injection_residual(ps: &ProductStructure) -> f64 {
    let mut worst: f64 = 0.0;
    let n = ps.factors.len();
    for i in 0..n {
        for j in 0..n {
            let comp = compose(&ps.projections[i], &ps.injections[j]).expect("composable");
            let expected = if i == j {
                StarHom::identity(&ps.factors[i])
            } else {
                StarHom::zero_hom(&ps.factors[j], &ps.factors[i])
            };
            let d = comp.distance(&expected).unwrap_or(f64::INFINITY);
            worst = worst.max(d);
        }
    }
    let d = ps.product.dim();
    let mut sum: CMatrix = DMatrix::zeros(d, d);
    for (s, p) in ps.injections.iter().zip(&ps.projections) {
        sum += s.matrix() * p.matrix();
    }
    let id = CMatrix::identity(d, d);
    let residual = (0..d).map(|c| (sum.column(c) - id.column(c)).norm()).fold(0.0, f64::max);
    worst.max(residual)
}
