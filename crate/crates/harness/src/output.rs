//! CSV emission. Floats are written with 17 significant digits so that
//! reading a file back reproduces the values bit for bit.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use thermoflux_core::dmh::ErrorReport;
use thermoflux_core::gummel::GummelTrace;
use thermoflux_core::models::FieldState;

use crate::sweep::IvRow;

pub const IV_HEADER: [&str; 6] = ["sweep_value", "I_total_A", "J_p", "J_n", "iters", "converged"];
pub const PROFILE_HEADER: [&str; 10] = ["x", "phi", "E", "n", "p", "T_n", "T_p", "T_e", "v_n", "v_p"];
pub const CONVERGENCE_HEADER: [&str; 8] = [
    "n_el",
    "h",
    "u_l2",
    "projected_u_l2",
    "trace_l2",
    "trace_max",
    "flux_l2",
    "flux_h1",
];
pub const TRACE_HEADER: [&str; 10] = [
    "iteration",
    "phi",
    "phi_p",
    "phi_n",
    "T_p",
    "T_n",
    "T_e",
    "newton",
    "peclet_continuity",
    "peclet_energy",
];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A rectangular table of strings with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_floats(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|&v| fmt_f64(v)).collect());
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses every cell of column `name` as `f64`.
    pub fn floats(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column(name)?;
        self.rows.iter().map(|r| r[k].parse().ok()).collect()
    }
}

pub fn iv_table(rows: &[IvRow]) -> Table {
    let mut t = Table::new(&IV_HEADER);
    for r in rows {
        t.rows.push(vec![
            fmt_f64(r.sweep_value),
            fmt_f64(r.current),
            fmt_f64(r.j_p),
            fmt_f64(r.j_n),
            r.iterations.to_string(),
            r.converged.to_string(),
        ]);
    }
    t
}

pub fn profile_table(state: &FieldState) -> Table {
    let mut t = Table::new(&PROFILE_HEADER);
    let (vp, vn) = (state.velocity(0), state.velocity(1));
    for m in 0..state.n_nodes() {
        t.push_floats(&[
            state.x[m],
            state.phi[m],
            state.e_field[m],
            state.n()[m],
            state.p()[m],
            state.t_ion[1][m],
            state.t_ion[0][m],
            state.t_fluid[m],
            vn[m],
            vp[m],
        ]);
    }
    t
}

pub fn convergence_table(n_el: &[usize], reports: &[ErrorReport<f64>]) -> Table {
    let mut t = Table::new(&CONVERGENCE_HEADER);
    for (n, r) in n_el.iter().zip(reports) {
        let mut row = vec![n.to_string()];
        row.extend(
            [
                r.h,
                r.u_l2,
                r.projected_u_l2,
                r.trace_l2,
                r.trace_max,
                r.flux_l2,
                r.flux_h1,
            ]
            .iter()
            .map(|&v| fmt_f64(v)),
        );
        t.rows.push(row);
    }
    t
}

pub fn trace_table(trace: &GummelTrace) -> Table {
    let mut t = Table::new(&TRACE_HEADER);
    for it in &trace.iterations {
        let mut row = vec![it.index.to_string()];
        row.extend(it.update.iter().map(|&v| fmt_f64(v)));
        row.push(it.newton_iterations.to_string());
        row.push(fmt_f64(it.peclet_continuity));
        row.push(fmt_f64(it.peclet_energy));
        t.rows.push(row);
    }
    t
}

pub fn write_csv(table: &Table, path: &Path) -> Result<(), OutputError> {
    let p = path.display().to_string();
    let file = File::create(path).map_err(|e| OutputError::Io {
        path: p.clone(),
        source: e,
    })?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e| OutputError::Csv {
        path: p.clone(),
        source: e,
    };
    w.write_record(&table.header).map_err(csv_err)?;
    for r in &table.rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let mut inner = w.into_inner().map_err(|e| OutputError::Io {
        path: p.clone(),
        source: e.into_error(),
    })?;
    inner.flush().map_err(|e| OutputError::Io { path: p, source: e })
}

pub fn read_csv(path: &Path) -> Result<Table, OutputError> {
    let p = path.display().to_string();
    let csv_err = |e| OutputError::Csv {
        path: p.clone(),
        source: e,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(String::from).collect());
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("iv.csv");
        write_csv(&iv_table(&[]), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "sweep_value,I_total_A,J_p,J_n,iters,converged\n");
    }

    #[test]
    fn floats_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let vals = [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, f64::MAX, 0.0];
        let mut t = Table::new(&["a"]);
        for v in vals {
            t.push_floats(&[v]);
        }
        write_csv(&t, &path).unwrap();
        let back = read_csv(&path).unwrap().floats("a").unwrap();
        for (a, b) in vals.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn iv_rows_keep_order() {
        let rows: Vec<IvRow> = (0..3)
            .map(|k| IvRow {
                sweep_value: k as f64,
                current: 1.0,
                j_p: 0.5,
                j_n: 0.5,
                iterations: 4,
                converged: k != 1,
                error: None,
            })
            .collect();
        let t = iv_table(&rows);
        assert_eq!(t.floats("sweep_value").unwrap(), vec![0.0, 1.0, 2.0]);
        assert_eq!(t.rows[1][5], "false");
    }
}
