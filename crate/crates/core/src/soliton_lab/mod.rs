//! η-Ricci solitons, Einstein-like fits, torse-forming fields and parallel
//! symmetric tensors.

mod einstein;
mod parallel;
mod soliton;
mod torse;

pub use einstein::{einstein_like_fit, einstein_like_suite, EinsteinFit, EinsteinLikeConstants};
pub use parallel::{parallel_tensor_check, ParallelCandidate};
pub use soliton::{
    collinear_potential_analysis, semi_symmetry_residual, soliton_residual, solve_soliton_constants,
    xi_consequence_suite, SolitonData, SolitonSolution,
};
pub use torse::{
    curvature_from_torse_forming, detect_torse_forming, torse_forming_constants, TorseClass,
    TorseConstants, TorseFormingData,
};

use symexpr::{Expr, Rational};

use crate::error::{GeometryError, Result};
use crate::geometry::Geometry;
use crate::tensor::TensorField;

/// Index pairs `i <= j` used as equations for symmetric (0,2) tensors.
fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Components `T(E_i, E_j)` (or `T_ij` without a frame) as expressions.
fn frame_matrix(geom: &Geometry, t: &TensorField) -> Result<Vec<Vec<Expr>>> {
    match &geom.frame {
        Some(frame) => frame.components(t),
        None => {
            let n = t.dim();
            Ok((0..n).map(|i| (0..n).map(|j| t.at2(i, j).clone()).collect()).collect())
        }
    }
}

/// Exact values of the frame (or coordinate) components at the base point.
fn base_values(geom: &Geometry, t: &TensorField, what: &str) -> Result<Vec<Vec<Rational>>> {
    values_at(geom, t, geom.structure.chart().base_point(), what)
}

fn values_at(geom: &Geometry, t: &TensorField, point: &[Rational], what: &str) -> Result<Vec<Vec<Rational>>> {
    let chart = geom.structure.chart();
    frame_matrix(geom, t)?
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| {
                    e.eval_exact(point).ok_or_else(|| {
                        GeometryError::NotExact(format!("{what} component {} is not rational there", chart.show(&e)))
                    })
                })
                .collect()
        })
        .collect()
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn show_matrix(rows: &[Vec<Rational>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}
