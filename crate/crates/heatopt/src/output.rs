use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use heatopt_core::SpaceTimeField;

use crate::{ResultRow, StudyError};

pub const HEADER: [&str; 9] = [
    "dof",
    "nx",
    "nt",
    "l2Error",
    "eoc",
    "simulationTime",
    "timePerDof",
    "cgIterMean",
    "cgIterVar",
];

fn create(path: &Path) -> Result<BufWriter<File>, StudyError> {
    File::create(path).map(BufWriter::new).map_err(|source| StudyError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes the convergence table. With `no_timing` the time columns are zero,
/// so repeated runs give identical bytes.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W, no_timing: bool) -> Result<(), StudyError> {
    if rows.is_empty() {
        return Err(StudyError::EmptyRows);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let (sim, per_dof) = if no_timing {
            (0.0, 0.0)
        } else {
            (r.simulation_ms(), r.time_per_dof_ns())
        };
        w.write_record([
            r.dof.to_string(),
            r.nx.to_string(),
            r.nt.to_string(),
            format!("{:.5e}", r.l2_error),
            r.eoc.map(|e| format!("{e:.2}")).unwrap_or_default(),
            format!("{sim:.3}"),
            format!("{per_dof:.3}"),
            format!("{:.4}", r.cg_iter_mean),
            format!("{:.4}", r.cg_iter_var),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path, no_timing: bool) -> Result<(), StudyError> {
    if rows.is_empty() {
        return Err(StudyError::EmptyRows);
    }
    write_csv(rows, create(path)?, no_timing)
}

/// `dof,simulationTime` per level, for log-log complexity plots.
pub fn write_timing_series<W: Write>(rows: &[ResultRow], out: W) -> Result<(), StudyError> {
    if rows.is_empty() {
        return Err(StudyError::EmptyRows);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["dof", "simulationTime"])?;
    for r in rows {
        w.write_record([r.dof.to_string(), format!("{:.3}", r.simulation_ms())])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_timing_series(rows: &[ResultRow], path: &Path) -> Result<(), StudyError> {
    if rows.is_empty() {
        return Err(StudyError::EmptyRows);
    }
    write_timing_series(rows, create(path)?)
}

/// One line per space-time node: `t,x1[,x2[,x3]],z`.
pub fn write_field<W: Write>(field: &SpaceTimeField, out: W) -> Result<(), StudyError> {
    let grid = field.grid();
    let mesh = field.mesh();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_owned()];
    header.extend((1..=grid.dim()).map(|k| format!("x{k}")));
    header.push("z".to_owned());
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(grid.dim() + 2);
    for i in 0..mesh.dofs() {
        let t = mesh.node(i + 1);
        for (k, z) in field.block(i).iter().enumerate() {
            let x = grid.node_coords(k);
            record.clear();
            record.push(format!("{t}"));
            record.extend(x[..grid.dim()].iter().map(|c| format!("{c}")));
            record.push(format!("{z:.12e}"));
            w.write_record(&record)?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_field(field: &SpaceTimeField, path: &Path) -> Result<(), StudyError> {
    write_field(field, create(path)?)
}
