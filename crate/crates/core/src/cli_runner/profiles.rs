//! Radial profiles of a space and its comparison model as CSV.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integral_norms::RadialGrid;
use crate::model_space::ModelParams;
use crate::warped_manifold::WarpedSpace;

/// Column names of [`write_profiles`].
pub const PROFILE_HEADER: &str = "r,phi,f,m_f,m_model,lambda_min,deficit,A_f,V_f";

/// Writes one row per grid node: warp, weight, weighted and model mean
/// curvature, smallest eigenvalue, deficit, weighted area and volume.
/// Beyond the first zero of the model's generalized sine the model mean
/// curvature is undefined and written as `NaN`.
pub fn write_profiles<W: Write>(
    space: &WarpedSpace<f64>,
    model: &ModelParams<f64>,
    grid: &RadialGrid<f64>,
    out: W,
) -> Result<()> {
    space.require_compatible(model)?;
    let nodes = grid.nodes();
    let volumes = space.weighted_volume_cumulative(nodes)?;
    let profile = space.deficit_profile(model.curvature, grid)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io {
        path: "<profile output>".into(),
        message: e.to_string(),
    };
    w.write_record(PROFILE_HEADER.split(',')).map_err(io)?;
    for (i, &r) in nodes.iter().enumerate() {
        let row = [
            r,
            space.warp().jet(r).value,
            space.weight().jet(r).value,
            space.weighted_mean_curvature(r)?,
            model.mean_curvature(r).unwrap_or(f64::NAN),
            profile.lambda_min[i],
            profile.deficit[i],
            space.weighted_area(r)?,
            volumes[i],
        ];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<profile output>".into(),
        message: e.to_string(),
    })
}

/// [`write_profiles`] into a file.
pub fn emit_profiles(
    space: &WarpedSpace<f64>,
    model: &ModelParams<f64>,
    grid: &RadialGrid<f64>,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    write_profiles(space, model, grid, std::io::BufWriter::new(file)).map_err(|e| match e {
        Error::Io { message, .. } => Error::Io {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_manifold::BuiltinFamily;

    fn rows(space: &WarpedSpace<f64>, h: f64, cells: usize, gamma: f64) -> Vec<Vec<f64>> {
        let model = space.model(h).unwrap();
        let grid = RadialGrid::new(space.r_min(), space.max_radius(), cells, gamma).unwrap();
        let mut buf = Vec::new();
        write_profiles(space, &model, &grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(PROFILE_HEADER));
        lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn flat_profile_has_no_deficit() {
        let s = WarpedSpace::builtin(BuiltinFamily::Flat, 3, 1.0, 1.0).unwrap();
        let r = rows(&s, 0.0, 64, 1.0);
        assert_eq!(r.len(), 65);
        assert!(r.iter().all(|row| row[6] == 0.0));
    }

    #[test]
    fn gaussian_deficit_column() {
        let s = WarpedSpace::builtin(BuiltinFamily::GaussianFlat { a: 1.0 }, 3, 2.0, 0.5).unwrap();
        for row in rows(&s, 0.25, 128, 2.0) {
            assert!((row[6] - row[0] * row[0] / 2.0).abs() < 1e-10);
            assert_eq!(row[4].is_nan(), row[0] >= 2.0 * std::f64::consts::PI);
        }
    }

    #[test]
    fn unwritable_path() {
        let s = WarpedSpace::builtin(BuiltinFamily::Flat, 3, 1.0, 1.0).unwrap();
        let m = s.model(0.0).unwrap();
        let grid = RadialGrid::uniform(s.r_min(), 1.0, 64).unwrap();
        let err = emit_profiles(&s, &m, &grid, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
