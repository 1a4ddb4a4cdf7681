//! One function per subcommand. CSV rows are written in frequency order.

use std::io::Write;

use nehari_ft::closedform::{branch_tilde, branches, build_stationary, regime};
use nehari_ft::dynamics::evolve_streaming;
use nehari_ft::groundstate::{identify, identify_with_variational, VariationalOptions};
use nehari_ft::spectral::{build_operator, spectral_report, OperatorKind};
use nehari_ft::stability::{bifurcation_sweep, mass_curve, omega_grid, BranchColumns};
use nehari_ft::{evaluate, perturb, DefectParams, EvolutionConfig, HalfLineGrid, PiecewiseField};
use serde::Serialize;
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::options::{Command, Format, Options};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_OMEGA_STEPS: usize = 200;
const DEFAULT_DT: f64 = 1e-3;
const DEFAULT_T_FINAL: f64 = 10.0;
const DEFAULT_STRIDE: usize = 100;

type Out<'a> = &'a mut dyn Write;

/// `o` with every default the command relies on made explicit, so the
/// header records the full configuration.
fn resolve(command: Command, o: &Options) -> Result<Options, Failure> {
    let mut o = o.clone();
    match command {
        Command::Bifurcation | Command::MassCurve => {
            o.omega_steps.get_or_insert(DEFAULT_OMEGA_STEPS);
        }
        Command::Evolve => {
            o.dt.get_or_insert(DEFAULT_DT);
            o.t_final.get_or_insert(DEFAULT_T_FINAL);
            o.snapshot_stride.get_or_insert(DEFAULT_STRIDE);
            o.amplitude.get_or_insert(0.0);
            o.scale.get_or_insert(1.0);
            o.seed.get_or_insert(0);
        }
        _ => {}
    }
    let uses_grid = match command {
        Command::Spectral | Command::Evolve => true,
        Command::Stationary => o.profile,
        Command::GroundState => o.variational,
        _ => false,
    };
    if uses_grid {
        let g = grid(&o, &point_params(&o)?)?;
        o.grid_l = Some(g.half_width());
        o.grid_n = Some(g.n());
    }
    Ok(o)
}

pub fn run(command: Command, o: &Options, out: Out) -> Result<(), Failure> {
    let o = &resolve(command, o)?;
    let header = format!("# nehari-ft {VERSION} {}", o.describe(command));
    let mut doc = Document {
        command,
        options: o,
        header,
        format: o.format(),
        out,
    };
    match command {
        Command::Stationary => stationary(&mut doc),
        Command::Bifurcation => bifurcation(&mut doc),
        Command::MassCurve => masscurve(&mut doc),
        Command::Spectral => spectral(&mut doc),
        Command::GroundState => ground_state(&mut doc),
        Command::Evolve => evolve(&mut doc),
    }
}

struct Document<'a> {
    command: Command,
    options: &'a Options,
    header: String,
    format: Format,
    out: Out<'a>,
}

impl Document<'_> {
    fn csv_header(&mut self, columns: &[&str]) -> Result<(), Failure> {
        writeln!(self.out, "{}", self.header)?;
        writeln!(self.out, "{}", columns.join(","))?;
        Ok(())
    }

    fn row(&mut self, cells: &[String]) -> Result<(), Failure> {
        writeln!(self.out, "{}", cells.join(","))?;
        Ok(())
    }

    fn json(&mut self, data: Value) -> Result<(), Failure> {
        let doc = json!({
            "version": VERSION,
            "config": self.options.describe(self.command),
            "data": data,
        });
        serde_json::to_writer_pretty(&mut *self.out, &doc).map_err(std::io::Error::from)?;
        writeln!(self.out)?;
        Ok(())
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn params(o: &Options, omega: f64) -> Result<DefectParams, Failure> {
    Ok(DefectParams::new(
        Options::require(o.tau, "tau")?,
        Options::require(o.v, "v")?,
        Options::require(o.mu, "mu")?,
        omega,
    )?)
}

fn point_params(o: &Options) -> Result<DefectParams, Failure> {
    params(o, Options::require(o.omega, "omega")?)
}

fn grid(o: &Options, p: &DefectParams) -> Result<HalfLineGrid, Failure> {
    let default = HalfLineGrid::for_params(p);
    let l = o.grid_l.unwrap_or(default.half_width());
    Ok(match o.grid_n {
        Some(n) => HalfLineGrid::new(l, n)?,
        None if o.grid_l.is_some() => {
            HalfLineGrid::new(l, 16)?;
            HalfLineGrid::with_spacing(l, default.spacing())
        }
        None => default,
    })
}

fn omegas(o: &Options) -> Result<Vec<f64>, Failure> {
    Ok(omega_grid(
        Options::require(o.omega_min, "omega-min")?,
        Options::require(o.omega_max, "omega-max")?,
        o.omega_steps.unwrap_or(DEFAULT_OMEGA_STEPS),
        o.log_omega,
    )?)
}

fn stationary(doc: &mut Document) -> Result<(), Failure> {
    let p = point_params(doc.options)?;
    branch_tilde(&p)?;
    let found = branches(&p);
    if doc.options.profile {
        let g = grid(doc.options, &p)?;
        let fields = found
            .iter()
            .map(|b| build_stationary(b, g))
            .collect::<nehari_ft::Result<Vec<_>>>()?;
        return profile(doc, g, &fields);
    }
    match doc.format {
        Format::Csv => {
            doc.csv_header(&[
                "branch", "T_minus", "T_plus", "x_minus", "x_plus", "mass", "kinetic", "lp", "defect", "energy",
                "action", "s_reduced",
            ])?;
            for b in &found {
                let r = nehari_ft::closed_form_report(b);
                doc.row(&[
                    b.label().to_string(),
                    num(b.t_minus()),
                    num(b.t_plus()),
                    num(b.x_minus()),
                    num(b.x_plus()),
                    num(r.mass2),
                    num(r.kinetic),
                    num(r.lp),
                    num(r.defect),
                    num(r.energy),
                    num(r.action),
                    num(r.reduced),
                ])?;
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Value> = found
                .iter()
                .map(|b| json!({ "branch": to_value(b), "report": to_value(nehari_ft::closed_form_report(b)) }))
                .collect();
            let reg = regime(&p);
            doc.json(json!({
                "omega_star": reg.omega_star,
                "omega_dstar": reg.omega_dstar,
                "count": reg.count,
                "branches": rows,
            }))
        }
    }
}

/// Samples on both sides; the origin appears twice, as `-0` then `+0`.
fn profile(doc: &mut Document, g: HalfLineGrid, fields: &[PiecewiseField]) -> Result<(), Failure> {
    let mut xs = Vec::with_capacity(2 * g.len());
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(2 * g.len()); fields.len()];
    for i in 0..g.len() {
        xs.push(if i == g.n() { -0.0 } else { g.x_minus(i) });
        for (c, f) in cols.iter_mut().zip(fields) {
            c.push(f.minus()[i].re);
        }
    }
    for i in 0..g.len() {
        xs.push(g.x_plus(i));
        for (c, f) in cols.iter_mut().zip(fields) {
            c.push(f.plus()[i].re);
        }
    }
    match doc.format {
        Format::Csv => {
            doc.csv_header(&["x", "u_tilde", "u_hat"])?;
            for (k, x) in xs.iter().enumerate() {
                doc.row(&[num(*x), num(cols[0][k]), opt(cols.get(1).map(|c| c[k]))])?;
            }
            Ok(())
        }
        Format::Json => doc.json(json!({
            "x": xs,
            "u_tilde": cols[0],
            "u_hat": cols.get(1),
        })),
    }
}

fn bifurcation(doc: &mut Document) -> Result<(), Failure> {
    let w = omegas(doc.options)?;
    let base = params(doc.options, w[w.len() - 1])?;
    let rows = bifurcation_sweep(&base, &w);
    match doc.format {
        Format::Csv => {
            doc.csv_header(&[
                "omega",
                "count",
                "T_tilde_minus",
                "T_tilde_plus",
                "x_tilde_minus",
                "x_tilde_plus",
                "T_hat_minus",
                "T_hat_plus",
                "x_hat_minus",
                "x_hat_plus",
                "mass_tilde",
                "mass_hat",
                "s_reduced_tilde",
                "s_reduced_hat",
            ])?;
            for r in &rows {
                let f = |b: Option<BranchColumns>, g: fn(&BranchColumns) -> f64| opt(b.as_ref().map(g));
                doc.row(&[
                    num(r.omega),
                    r.count.to_string(),
                    f(r.tilde, |b| b.t_minus),
                    f(r.tilde, |b| b.t_plus),
                    f(r.tilde, |b| b.x_minus),
                    f(r.tilde, |b| b.x_plus),
                    f(r.hat, |b| b.t_minus),
                    f(r.hat, |b| b.t_plus),
                    f(r.hat, |b| b.x_minus),
                    f(r.hat, |b| b.x_plus),
                    f(r.tilde, |b| b.mass),
                    f(r.hat, |b| b.mass),
                    f(r.tilde, |b| b.reduced),
                    f(r.hat, |b| b.reduced),
                ])?;
            }
            Ok(())
        }
        Format::Json => doc.json(to_value(&rows)),
    }
}

fn masscurve(doc: &mut Document) -> Result<(), Failure> {
    let w = omegas(doc.options)?;
    let base = params(doc.options, w[w.len() - 1])?;
    let points = mass_curve(&base, &w).into_iter().collect::<nehari_ft::Result<Vec<_>>>()?;
    match doc.format {
        Format::Csv => {
            doc.csv_header(&["omega", "mass", "dmass_domega", "phi", "verdict"])?;
            for m in &points {
                doc.row(&[num(m.omega), num(m.mass), num(m.dmass), num(m.phi), m.verdict.name().to_string()])?;
            }
            Ok(())
        }
        Format::Json => doc.json(to_value(&points)),
    }
}

fn spectral(doc: &mut Document) -> Result<(), Failure> {
    let p = point_params(doc.options)?;
    let g = grid(doc.options, &p)?;
    let reports = [OperatorKind::L1, OperatorKind::L2]
        .iter()
        .map(|&k| spectral_report(&build_operator(k, &p, g)?))
        .collect::<nehari_ft::Result<Vec<_>>>()?;
    match doc.format {
        Format::Csv => {
            doc.csv_header(&["operator", "index", "eigenvalue"])?;
            for r in &reports {
                for (i, l) in r.eigenvalues.iter().enumerate() {
                    doc.row(&[r.kind.name().to_string(), i.to_string(), num(*l)])?;
                }
            }
            Ok(())
        }
        Format::Json => doc.json(json!({
            "grid_L": g.half_width(),
            "grid_N": g.n(),
            "reports": to_value(&reports),
        })),
    }
}

fn ground_state(doc: &mut Document) -> Result<(), Failure> {
    let p = point_params(doc.options)?;
    let result = if doc.options.variational {
        identify_with_variational(&p, grid(doc.options, &p)?, &VariationalOptions::default())?
    } else {
        identify(&p)?
    };
    let winner = result.winner_label().to_string();
    let variational = result.variational.as_ref().map(|v| (v, evaluate(&v.field, &p).mass2));
    match doc.format {
        Format::Csv => {
            doc.csv_header(&["branch", "s_reduced", "mass", "is_ground_state"])?;
            let mut reports = vec![("tilde", result.tilde)];
            reports.extend(result.hat.map(|h| ("hat", h)));
            for (name, r) in reports {
                doc.row(&[name.to_string(), num(r.reduced), num(r.mass2), (name == winner).to_string()])?;
            }
            if let Some((v, mass)) = variational {
                doc.row(&["variational".into(), num(v.value), num(mass), String::new()])?;
            }
            Ok(())
        }
        Format::Json => {
            let mut data = to_value(&result);
            if let Some((v, mass)) = variational {
                data["variational"] = json!({
                    "s_reduced": v.value,
                    "mass": mass,
                    "iterations": v.iterations,
                    "converged": v.converged,
                    "grad_norm": v.grad_norm,
                });
            }
            doc.json(data)
        }
    }
}

fn evolve(doc: &mut Document) -> Result<(), Failure> {
    let o = doc.options;
    let p = point_params(o)?;
    let g = grid(o, &p)?;
    let cfg = EvolutionConfig::new(
        o.dt.unwrap_or(DEFAULT_DT),
        o.t_final.unwrap_or(DEFAULT_T_FINAL),
        o.snapshot_stride.unwrap_or(DEFAULT_STRIDE),
    )?;
    let ground = build_stationary(&branch_tilde(&p)?, g)?;
    let mut u0 = ground.clone();
    let scale = o.scale.unwrap_or(1.0);
    if scale != 1.0 {
        u0 = u0.scaled(scale);
    }
    let amplitude = o.amplitude.unwrap_or(0.0);
    if amplitude != 0.0 {
        u0 = perturb(&u0, &p, amplitude, o.seed.unwrap_or(0));
    }
    match doc.format {
        Format::Csv => {
            doc.csv_header(&["t", "mass_drift", "energy_drift", "orbital_distance"])?;
            let mut write_err = None;
            let report = evolve_streaming(&u0, &p, &cfg, Some(&ground), |s| {
                let line = format!(
                    "{},{},{},{}",
                    num(s.t),
                    num(s.mass_drift),
                    num(s.energy_drift),
                    num(s.orbital_distance)
                );
                if let Err(e) = writeln!(doc.out, "{line}") {
                    write_err.get_or_insert(e);
                }
                Ok(())
            })?;
            if let Some(e) = write_err {
                return Err(e.into());
            }
            if let Some(t) = report.blow_up {
                writeln!(doc.out, "# blow-up at t={}", num(t))?;
            }
            Ok(())
        }
        Format::Json => {
            let report = nehari_ft::evolve(&u0, &p, &cfg, Some(&ground))?;
            let snaps: Vec<_> = report.snapshots().collect();
            doc.json(json!({
                "grid_L": g.half_width(),
                "grid_N": g.n(),
                "blow_up": report.blow_up,
                "snapshots": to_value(&snaps),
            }))
        }
    }
}
