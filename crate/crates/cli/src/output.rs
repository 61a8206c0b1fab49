//! CSV and JSON artifact writers.

use crate::AppError;
use acidlab_core::auxode::AuxTrajectory;
use acidlab_core::pde::{FieldSnapshot, Grid1D, NormSample};
use std::io::Write;
use std::path::Path;

/// 17-significant-digit decimal rendering used in every CSV cell.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory_csv(path: &Path, samples: &[NormSample]) -> Result<(), AppError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "t,linf_u,linf_v,linf_w,l2_u,l2_v,l2_w,dirichlet_w")?;
    for s in samples {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.linf_u),
            fmt_f64(s.linf_v),
            fmt_f64(s.linf_w),
            fmt_f64(s.l2_u),
            fmt_f64(s.l2_v),
            fmt_f64(s.l2_w),
            fmt_f64(s.dirichlet_w),
        )?;
    }
    Ok(())
}

pub fn write_snapshot_csv(path: &Path, snap: &FieldSnapshot, grid: &Grid1D) -> Result<(), AppError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "x,u,v,w")?;
    let centers = grid.centers();
    for i in 0..grid.n_cells {
        writeln!(
            f,
            "{},{},{},{}",
            fmt_f64(centers[i]),
            fmt_f64(snap.u[i]),
            fmt_f64(snap.v[i]),
            fmt_f64(snap.w[i]),
        )?;
    }
    Ok(())
}

pub fn write_aux_csv(path: &Path, aux: &AuxTrajectory) -> Result<(), AppError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    match aux {
        AuxTrajectory::H(samples) => {
            writeln!(f, "t,u_bar,u_under,v_bar,v_under")?;
            for (t, s) in samples {
                writeln!(
                    f,
                    "{},{},{},{},{}",
                    fmt_f64(*t),
                    fmt_f64(s.u_bar),
                    fmt_f64(s.u_under),
                    fmt_f64(s.v_bar),
                    fmt_f64(s.v_under),
                )?;
            }
        }
        AuxTrajectory::C(samples) => {
            writeln!(f, "t,u_bar,v_bar,v_under")?;
            for (t, s) in samples {
                writeln!(
                    f,
                    "{},{},{},{}",
                    fmt_f64(*t),
                    fmt_f64(s.u_bar),
                    fmt_f64(s.v_bar),
                    fmt_f64(s.v_under),
                )?;
            }
        }
        AuxTrajectory::R(samples) => {
            writeln!(f, "t,u_under,v_bar")?;
            for (t, s) in samples {
                writeln!(f, "{},{},{}", fmt_f64(*t), fmt_f64(s.u_under), fmt_f64(s.v_bar))?;
            }
        }
    }
    Ok(())
}

/// Pretty JSON either to a file or stdout.
pub fn emit_json(value: &serde_json::Value, path: Option<&Path>) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_f64(1.0 / 3.0);
        assert_eq!(s, "3.3333333333333331e-1");
        // round-trips exactly
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
