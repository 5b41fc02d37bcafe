use std::fmt::Write;
use std::path::PathBuf;

use polyspectra_core::faultlines::{build_surface_map, fault_scan, halton_probes};
use polyspectra_core::perturbations::{certify_multiple, distance_to_multiple, DistanceOptions, SaddleKind};
use polyspectra_core::pseudospectrum::{
    boundedness_check, components, compute_field, contour_polylines, default_window, find_boundary_seed,
    label_sublevel, trace_boundary, GridSpec, ScalarField, TraceOptions,
};
use polyspectra_core::{Complex64, EigenReport, Error};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command, Common};
use crate::error::{CliError, CliResult};
use crate::output::{csv_bytes, num, OutputSet};
use crate::report::*;
use crate::spec::{parse_problem, ProblemSpec};
use crate::svg::{layer_color, Plot};

/// Levels in the default sweep over `[1e-4, 1e-1]·max_norm`.
pub const DEFAULT_SWEEP: usize = 7;

/// Everything a finished command hands back to `main`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub files: OutputSet,
}

struct Context<'a> {
    command: &'static str,
    common: &'a Common,
    spec: ProblemSpec,
    digest: String,
    warnings: Vec<String>,
    outcome: Outcome,
}

#[derive(Clone, Copy)]
struct Allowed {
    json: bool,
    csv: bool,
    svg: bool,
}

impl<'a> Context<'a> {
    fn load(command: &'static str, common: &'a Common, allowed: Allowed) -> CliResult<Self> {
        for (given, ok, flag) in [
            (common.json.is_some(), allowed.json, "--json"),
            (common.csv.is_some(), allowed.csv, "--csv"),
            (common.svg.is_some(), allowed.svg, "--svg"),
        ] {
            if given && !ok {
                return Err(CliError::Parse(format!("{flag} is not supported by `{command}`")));
            }
        }
        let bytes = std::fs::read(&common.input)
            .map_err(|e| CliError::Io(format!("{}: {e}", common.input.display())))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| CliError::Parse(format!("{}: {e}", common.input.display())))?;
        let spec = parse_problem(text)?;
        Ok(Self {
            command,
            common,
            spec,
            digest: hex::encode(Sha256::digest(&bytes)),
            warnings: Vec::new(),
            outcome: Outcome::default(),
        })
    }

    fn eigen(&self) -> CliResult<EigenReport> {
        Ok(self.spec.polynomial.eigenvalues(None)?)
    }

    /// `--eps`, else the input's list, else a log sweep over `[1e-4, 1e-1]·max_norm`.
    fn epsilons(&self) -> CliResult<Vec<f64>> {
        if let Some(e) = self.common.eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(CliError::Parse(format!("--eps values must be positive, got {e}")));
        }
        if !self.common.eps.is_empty() {
            return Ok(self.common.eps.clone());
        }
        if !self.spec.epsilons.is_empty() {
            return Ok(self.spec.epsilons.clone());
        }
        let scale = self.spec.polynomial.max_norm();
        Ok((0..DEFAULT_SWEEP)
            .map(|k| scale * 10f64.powf(-4.0 + 3.0 * k as f64 / (DEFAULT_SWEEP - 1) as f64))
            .collect())
    }

    fn explicit_epsilons(&self) -> bool {
        !self.common.eps.is_empty() || !self.spec.epsilons.is_empty()
    }

    fn grid_dims(&self, default: usize) -> CliResult<(usize, usize)> {
        match self.common.grid.as_deref() {
            None => Ok((default, default)),
            Some(&[nx, ny]) if nx >= 2 && ny >= 2 => Ok((nx, ny)),
            Some(g) => Err(CliError::Parse(format!("--grid needs two values ≥ 2, got {g:?}"))),
        }
    }

    fn explicit_window(&self, nx: usize, ny: usize) -> CliResult<Option<GridSpec>> {
        let bounds = match (self.common.window.as_deref(), self.spec.window) {
            (Some(&[x0, x1, y0, y1]), _) => Some((x0, x1, y0, y1)),
            (Some(w), _) => return Err(CliError::Parse(format!("--window needs four values, got {w:?}"))),
            (None, Some(w)) => Some((w.x_min, w.x_max, w.y_min, w.y_max)),
            (None, None) => None,
        };
        bounds
            .map(|(x0, x1, y0, y1)| {
                GridSpec::new(x0, x1, y0, y1, nx, ny).map_err(|e| CliError::Parse(format!("--window: {e}")))
            })
            .transpose()
    }

    fn window(&self, eps_max: f64, eigen: &EigenReport, nx: usize, ny: usize) -> CliResult<GridSpec> {
        match self.explicit_window(nx, ny)? {
            Some(g) => Ok(g),
            None => Ok(default_window(&self.spec.polynomial, &self.spec.weight, eps_max, eigen, nx, ny)?),
        }
    }

    fn run_report(&self) -> RunReport {
        let outputs = [&self.common.json, &self.common.csv, &self.common.svg]
            .into_iter()
            .flatten()
            .map(|p| p.display().to_string())
            .collect();
        RunReport {
            command: self.command.to_string(),
            input_sha256: self.digest.clone(),
            outputs,
            warnings: self.warnings.clone(),
        }
    }

    fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }

    fn say(&mut self, line: String) {
        self.outcome.stdout.push_str(&line);
        self.outcome.stdout.push('\n');
    }

    fn emit_json<T: Serialize>(&mut self, report: &T) {
        if let Some(path) = self.common.json.clone() {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            self.outcome.files.add(&path, s.into_bytes());
        }
    }

    fn emit(&mut self, path: Option<PathBuf>, bytes: impl FnOnce() -> Vec<u8>) {
        if let Some(path) = path {
            self.outcome.files.add(&path, bytes());
        }
    }

    fn finish(mut self) -> Outcome {
        self.outcome.warnings = self.warnings;
        self.outcome
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6} {} {:.6}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

fn draw_eigenvalues(plot: &mut Plot, eigen: &EigenReport) {
    for &z in &eigen.eigenvalues {
        plot.plus(z, "black");
    }
}

fn draw_contours(plot: &mut Plot, field: &ScalarField, levels: &[f64]) -> Vec<usize> {
    levels
        .iter()
        .enumerate()
        .map(|(k, &eps)| {
            let color = layer_color(k);
            let lines = contour_polylines(field, eps);
            for l in &lines {
                plot.polyline(&l.points, l.closed, color, 1.2);
            }
            plot.legend(format!("ε = {eps:e}"), color);
            lines.len()
        })
        .collect()
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let all = Allowed {
        json: true,
        csv: true,
        svg: true,
    };
    match &cli.command {
        Command::Eigs(c) => eigs(Context::load("eigs", c, Allowed { csv: false, svg: false, ..all })?),
        Command::Field { common, faults } => field(Context::load("field", common, all)?, *faults),
        Command::Trace { common, seed } => trace(Context::load("trace", common, all)?, seed),
        Command::Components(c) => components_cmd(Context::load("components", c, Allowed { csv: false, ..all })?),
        Command::Faults(c) => faults(Context::load("faults", c, all)?),
        Command::Distance(c) => distance(Context::load("distance", c, Allowed { csv: false, ..all })?),
        Command::Perturb { common, mu } => perturb(
            Context::load("perturb", common, Allowed { csv: false, svg: false, ..all })?,
            Complex64::new(mu[0], mu[1]),
        ),
    }
}

fn eigs(mut ctx: Context) -> CliResult<Outcome> {
    let p = ctx.spec.polynomial.clone();
    let leading_smin = p.check_leading_nonsingular()?;
    let eigen = ctx.eigen()?;
    let eigenvalues: Vec<Eigenvalue> = eigen
        .iter()
        .map(|(z, algebraic)| Eigenvalue {
            value: z.into(),
            algebraic,
            geometric: p.geometric_multiplicity(z, 1e-8),
        })
        .collect();
    ctx.say(format!("{:>4}  {:>32}  {:>9}  {:>9}", "#", "eigenvalue", "algebraic", "geometric"));
    for (k, e) in eigenvalues.iter().enumerate() {
        let z = Complex64::new(e.value.re, e.value.im);
        ctx.say(format!("{:>4}  {:>32}  {:>9}  {:>9}", k + 1, fmt_c(z), e.algebraic, e.geometric));
    }
    let report = EigsReport {
        run: ctx.run_report(),
        n: p.dim(),
        m: p.degree(),
        leading_smin,
        eigenvalues,
    };
    ctx.emit_json(&report);
    Ok(ctx.finish())
}

fn field(mut ctx: Context, overlay_faults: bool) -> CliResult<Outcome> {
    let (p, w) = (ctx.spec.polynomial.clone(), ctx.spec.weight.clone());
    let eps = ctx.epsilons()?;
    let eigen = ctx.eigen()?;
    let (nx, ny) = ctx.grid_dims(201)?;
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let window = ctx.window(eps_max, &eigen, nx, ny)?;
    let field = compute_field(&p, &w, window);

    let mut plot = Plot::new(window);
    let contours = draw_contours(&mut plot, &field, &eps);
    let mut levels = Vec::new();
    for (&e, contours) in eps.iter().zip(contours) {
        let count = match components(&field, e, &eigen) {
            Ok(r) => r.count,
            Err(Error::GridTooCoarse { .. }) => {
                ctx.warn(format!("grid does not resolve every eigenvalue at ε = {e:e}"));
                label_sublevel(&field, e).1
            }
            Err(err) => return Err(err.into()),
        };
        let bounded = boundedness_check(&p, &w, e)?;
        if !bounded {
            ctx.warn(format!("Λε is unbounded at ε = {e:e}; components are clipped by the window"));
        }
        ctx.say(format!("ε = {e:e}: {count} components, {contours} contour lines"));
        levels.push(Level {
            epsilon: e,
            components: count,
            contours,
            bounded,
        });
    }
    let fault_points = if overlay_faults {
        let map = build_surface_map(&p, &halton_probes(&window, 32))?;
        let rep = fault_scan(&p, &window, &map);
        for &(i, j) in &rep.cells {
            plot.dot(window.point(i, j), 1.0, "#999999");
        }
        for &z in &rep.refined_points {
            plot.dot(z, 2.0, "#d62728");
        }
        ctx.say(format!("{} fault points", rep.refined_points.len()));
        Some(rep.refined_points.iter().map(|&z| z.into()).collect())
    } else {
        None
    };
    draw_eigenvalues(&mut plot, &eigen);

    let (field_min, field_max) = field.min_max();
    let report = FieldReport {
        run: ctx.run_report(),
        window: window.into(),
        field_min,
        field_max,
        levels,
        fault_points,
    };
    ctx.emit_json(&report);
    ctx.emit(ctx.common.csv.clone(), || {
        csv_bytes(
            &["x", "y", "value"],
            (0..window.len()).map(|idx| {
                let z = window.point_at(idx);
                [num(z.re), num(z.im), num(field.values[idx])]
            }),
        )
    });
    ctx.emit(ctx.common.svg.clone(), || plot.render().into_bytes());
    Ok(ctx.finish())
}

fn trace(mut ctx: Context, seeds: &[f64]) -> CliResult<Outcome> {
    let (p, w) = (ctx.spec.polynomial.clone(), ctx.spec.weight.clone());
    let eps = ctx.epsilons()?;
    let eigen = ctx.eigen()?;
    let (nx, ny) = ctx.grid_dims(201)?;
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let window = ctx.window(eps_max, &eigen, nx, ny)?;
    let opts = TraceOptions::for_window(window);
    let origins: Vec<Complex64> = if seeds.is_empty() {
        eigen.eigenvalues.clone()
    } else {
        seeds.chunks(2).map(|s| Complex64::new(s[0], s[1])).collect()
    };

    let mut plot = Plot::new(window);
    let mut curves = Vec::new();
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    for (k, &e) in eps.iter().enumerate() {
        let first = curves.len();
        for &origin in &origins {
            let seed = match find_boundary_seed(&p, &w, e, origin, Complex64::new(1.0, 0.0), window.diagonal()) {
                Ok(s) => s,
                Err(err) => {
                    ctx.warn(format!("ε = {e:e}, origin {}: {err}", fmt_c(origin)));
                    continue;
                }
            };
            let seen = points[first..]
                .iter()
                .any(|c| c.iter().any(|z| (z - seed).norm() <= 3.0 * opts.step_size));
            if seen {
                continue;
            }
            let curve = match trace_boundary(&p, &w, e, seed, &opts) {
                Ok(c) => c,
                Err(err) => {
                    ctx.warn(format!("ε = {e:e}, seed {}: {err}", fmt_c(seed)));
                    continue;
                }
            };
            plot.polyline(&curve.points, curve.closed, layer_color(k), 1.2);
            ctx.say(format!(
                "curve {}: ε = {e:e}, {} points, {}",
                curves.len(),
                curve.points.len(),
                curve.termination.as_str()
            ));
            curves.push(Curve {
                id: curves.len(),
                epsilon: e,
                origin: origin.into(),
                closed: curve.closed,
                termination: curve.termination.as_str(),
                points: curve.points.len(),
                min_gradient_norm: curve.min_gradient_norm,
                min_gradient_point: curve.min_gradient_point.into(),
                interior_level_curve: curve.interior_level_curve,
            });
            points.push(curve.points);
        }
        plot.legend(format!("ε = {e:e}"), layer_color(k));
    }
    if curves.is_empty() {
        return Err(CliError::Numerical("no boundary curve could be traced".into()));
    }
    draw_eigenvalues(&mut plot, &eigen);

    let report = TraceReport {
        run: ctx.run_report(),
        window: window.into(),
        curves,
    };
    ctx.emit_json(&report);
    ctx.emit(ctx.common.csv.clone(), || {
        csv_bytes(
            &["curve_id", "x", "y"],
            points
                .iter()
                .enumerate()
                .flat_map(|(id, c)| c.iter().map(move |z| [id.to_string(), num(z.re), num(z.im)])),
        )
    });
    ctx.emit(ctx.common.svg.clone(), || plot.render().into_bytes());
    Ok(ctx.finish())
}

fn components_cmd(mut ctx: Context) -> CliResult<Outcome> {
    let (p, w) = (ctx.spec.polynomial.clone(), ctx.spec.weight.clone());
    let eps = ctx.epsilons()?;
    let eigen = ctx.eigen()?;
    let (nx, ny) = ctx.grid_dims(201)?;
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let window = ctx.window(eps_max, &eigen, nx, ny)?;
    let field = compute_field(&p, &w, window);

    let mut levels = Vec::new();
    for &e in &eps {
        let r = components(&field, e, &eigen)?;
        let bounded = boundedness_check(&p, &w, e)?;
        if !bounded {
            ctx.warn(format!("Λε is unbounded at ε = {e:e}; components are clipped by the window"));
        }
        let totals = r.multiplicity_totals();
        let comps: Vec<Component> = (0..r.count)
            .map(|k| Component {
                label: k as u32 + 1,
                bounded: r.bounded[k],
                multiplicity: totals[k],
                eigenvalues: r.eigen_assignment[k]
                    .iter()
                    .map(|&(z, m)| HeldEigenvalue {
                        value: z.into(),
                        multiplicity: m,
                    })
                    .collect(),
            })
            .collect();
        ctx.say(format!(
            "ε = {e:e}: {} components, multiplicities {:?}",
            r.count, totals
        ));
        levels.push(ComponentLevel {
            epsilon: e,
            count: r.count,
            all_bounded: r.all_bounded(),
            empty_components: r.empty_components(),
            pseudospectrum_bounded: bounded,
            components: comps,
        });
    }
    let mut plot = Plot::new(window);
    draw_contours(&mut plot, &field, &eps);
    draw_eigenvalues(&mut plot, &eigen);

    let report = ComponentsReport {
        run: ctx.run_report(),
        window: window.into(),
        levels,
    };
    ctx.emit_json(&report);
    ctx.emit(ctx.common.svg.clone(), || plot.render().into_bytes());
    Ok(ctx.finish())
}

fn faults(mut ctx: Context) -> CliResult<Outcome> {
    let (p, w) = (ctx.spec.polynomial.clone(), ctx.spec.weight.clone());
    let eps = ctx.epsilons()?;
    let eigen = ctx.eigen()?;
    let (nx, ny) = ctx.grid_dims(161)?;
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let window = ctx.window(eps_max, &eigen, nx, ny)?;
    let map = build_surface_map(&p, &halton_probes(&window, 32))?;
    let rep = fault_scan(&p, &window, &map);
    ctx.say(format!(
        "{} candidate cells, {} refined fault points",
        rep.cells.len(),
        rep.refined_points.len()
    ));
    for &z in &rep.refined_points {
        ctx.say(format!("  {}", fmt_c(z)));
    }

    let mut plot = Plot::new(window);
    if ctx.explicit_epsilons() {
        let field = compute_field(&p, &w, window);
        draw_contours(&mut plot, &field, &eps);
    }
    for &(i, j) in &rep.cells {
        plot.dot(window.point(i, j), 1.0, "#999999");
    }
    for &z in &rep.refined_points {
        plot.dot(z, 2.0, "#d62728");
    }
    draw_eigenvalues(&mut plot, &eigen);

    let report = FaultsReport {
        run: ctx.run_report(),
        window: window.into(),
        surface_map: SurfaceMap {
            representative: map.representative.clone(),
            c1: map.c1,
            c2: map.c2,
            multiplicities: map.multiplicities.clone(),
        },
        candidate_cells: rep.cells.len(),
        empty: rep.empty,
        refined_points: rep.refined_points.iter().map(|&z| z.into()).collect(),
    };
    ctx.emit_json(&report);
    ctx.emit(ctx.common.csv.clone(), || {
        csv_bytes(&["x", "y"], rep.refined_points.iter().map(|z| [num(z.re), num(z.im)]))
    });
    ctx.emit(ctx.common.svg.clone(), || plot.render().into_bytes());
    Ok(ctx.finish())
}

fn distance(mut ctx: Context) -> CliResult<Outcome> {
    let (p, w) = (ctx.spec.polynomial.clone(), ctx.spec.weight.clone());
    let eps_max = match ctx.common.eps.first() {
        Some(&e) if e.is_finite() && e > 0.0 => e,
        Some(e) => return Err(CliError::Parse(format!("--eps must be positive, got {e}"))),
        None => ctx.epsilons()?.into_iter().fold(0.0, f64::max),
    };
    let (nx, ny) = ctx.grid_dims(301)?;
    let opts = DistanceOptions {
        nx,
        ny,
        window: ctx.explicit_window(nx, ny)?,
        ..Default::default()
    };
    let rep = distance_to_multiple(&p, &w, eps_max, &opts)?;
    for msg in &rep.warnings {
        ctx.warn(msg.clone());
    }
    if rep.certificate.q_hat.origin_substitution {
        ctx.warn("μ = 0 with a non-constant weight: the constant weight w₀ was substituted".into());
    }
    let cert = &rep.certificate;
    ctx.say(format!("r(P) = {:.10} (bracket [{:e}, {:e}])", rep.r, rep.bracket.0, rep.bracket.1));
    ctx.say(format!(
        "μ = {}, k = {}, defective = {}, residual = {:e}",
        fmt_c(cert.mu),
        cert.geometric_mult,
        cert.defective,
        cert.residual()
    ));
    if let Some((lo, hi)) = rep.connected_bracket {
        ctx.say(format!("all eigenvalues share one component from ε ∈ [{lo:e}, {hi:e}]"));
    }

    let mut plot = Plot::new(rep.window);
    if ctx.common.svg.is_some() {
        let field = compute_field(&p, &w, rep.window);
        draw_contours(&mut plot, &field, &[rep.bracket.0, rep.bracket.1]);
        plot.dot(cert.mu, 3.0, "#d62728");
        draw_eigenvalues(&mut plot, &p.eigenvalues(None)?);
    }
    let report = DistanceReport {
        run: ctx.run_report(),
        r: rep.r,
        bracket: [rep.bracket.0, rep.bracket.1],
        refined: rep.refined,
        saddle_kind: rep.saddle_kind.map(|k| match k {
            SaddleKind::Smooth => "smooth",
            SaddleKind::Fault => "fault",
        }),
        initial_components: rep.initial_components,
        connected_bracket: rep.connected_bracket.map(|(a, b)| [a, b]),
        origin_case: rep.origin_case,
        bounded: rep.bounded,
        window: rep.window.into(),
        certificate: cert.into(),
    };
    ctx.emit_json(&report);
    ctx.emit(ctx.common.svg.clone(), || plot.render().into_bytes());
    Ok(ctx.finish())
}

fn perturb(mut ctx: Context, mu: Complex64) -> CliResult<Outcome> {
    let cert = certify_multiple(&ctx.spec.polynomial, &ctx.spec.weight, mu)?;
    if cert.q_hat.origin_substitution {
        ctx.warn("μ = 0 with a non-constant weight: the constant weight w₀ was substituted".into());
    }
    let mut line = format!(
        "δ = {:.10}, k = {}, geometric multiplicity in Q̂ = {}",
        cert.delta, cert.geometric_mult, cert.geometric_mult_qhat
    );
    if let Some(c) = cert.criterion {
        let _ = write!(line, ", |u*Q̂′(μ)v| = {:e}", c.norm());
    }
    ctx.say(line);
    let report = PerturbReport {
        run: ctx.run_report(),
        certificate: (&cert).into(),
    };
    ctx.emit_json(&report);
    Ok(ctx.finish())
}
