//! One function per subcommand, each mapping onto a library operation.

use std::time::Instant;

use frechet_core::bounds::pair_bounds;
use frechet_core::exact::{format_rational, pairs, parse_rational, point, to_f64, Rational};
use frechet_core::lp::FarkasCertificate;
use frechet_core::model::{subsets_of_order, theta_from_density, Density, FrechetClass};
use frechet_core::rays::{class_rays, RayMatrix, RayOptions};
use frechet_core::sampler::{empirical_moments, sample};
use frechet_core::solvers::{
    fit_density_direct, fit_lambda, minimize_higher_moments, nearest_feasible_correlation,
    nearest_feasible_moments, FitResult, ProjectionSource,
};
use serde_json::Value;

use crate::report::{
    CertificateReport, CertificateRow, Diagnostics, DistanceReport, MomentCheck, PairBoundReport,
    PairValue, Report, SampleReport, Scalar, SupportOrder, ThetaEntry, ThetaReport, Vector,
};
use crate::spec::{parse_spec, Mode, Objective, Problem, Target};
use crate::{read_file, CliError, Command, CommonArgs, Outcome, EXIT_INFEASIBLE, EXIT_OK};

const DEFAULT_SAMPLE_SIZE: usize = 10_000;

/// Row order for support-indexed output: row `k` holds canonical index
/// `order[k]`.
fn row_order(m: usize, paper: bool) -> Vec<usize> {
    let top = (1usize << m) - 1;
    (0..=top).map(|k| if paper { top ^ k } else { k }).collect()
}

fn support_order(m: usize, paper: bool) -> SupportOrder {
    let (name, rule) = if paper {
        (
            "paper",
            "row k holds the point whose canonical index is (2^m - 1) XOR k, \
             i.e. the complement of the canonical point in row k",
        )
    } else {
        (
            "canonical",
            "row j holds the point with x_i = bit (i - 1) of j; coordinate 1 varies fastest",
        )
    };
    SupportOrder {
        name: name.into(),
        rule: rule.into(),
        points: row_order(m, paper)
            .into_iter()
            .map(|j| point(m, j).iter().map(u8::to_string).collect())
            .collect(),
    }
}

struct Ctx<'a> {
    args: &'a CommonArgs,
    start: Instant,
}

impl Ctx<'_> {
    fn places(&self) -> usize {
        self.args.precision
    }

    fn support_vector(&self, values: &[Rational]) -> Vector {
        let m = values.len().trailing_zeros() as usize;
        let order = row_order(m, self.args.paper_order);
        Vector::new(order.iter().map(|&j| &values[j]), self.places())
    }

    fn base(&self, command: &str, class: &FrechetClass) -> Report {
        Report {
            command: command.into(),
            status: "ok".into(),
            m: class.dimension(),
            p: class.p().iter().map(format_rational).collect(),
            ..Report::default()
        }
    }

    fn with_support(&self, mut report: Report) -> Report {
        report.support_order = Some(support_order(report.m, self.args.paper_order));
        report
    }

    fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            ..Diagnostics::default()
        }
    }

    fn mode(&self, problem: &Problem) -> Mode {
        self.args.mode.or(problem.options.mode).unwrap_or_default()
    }

    fn ray_options(&self) -> RayOptions {
        RayOptions {
            max_dimension: self.args.ray_cap,
        }
    }
}

fn load_problem(args: &CommonArgs) -> Result<Problem, CliError> {
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::invalid("--input <problem.json> is required"))?;
    parse_spec(&read_file(path)?)?.validate()
}

pub fn dispatch(command: Command, args: &CommonArgs) -> Result<Outcome, CliError> {
    if args.csv.is_some() && !matches!(command, Command::Rays | Command::Sample) {
        return Err(CliError::invalid(
            "--csv is only available for rays and sample",
        ));
    }
    let ctx = Ctx {
        args,
        start: Instant::now(),
    };
    match command {
        Command::Theta => theta(&ctx),
        Command::Sample => sample_command(&ctx),
        other => {
            let problem = load_problem(args)?;
            match other {
                Command::Rays => rays(&ctx, &problem),
                Command::Bounds => bounds(&ctx, &problem),
                Command::Fit => fit(&ctx, &problem),
                Command::Nearest => nearest(&ctx, &problem),
                Command::Minimize => minimize(&ctx, &problem),
                Command::Theta | Command::Sample => unreachable!(),
            }
        }
    }
}

fn enumerate(ctx: &Ctx, problem: &Problem) -> Result<RayMatrix, CliError> {
    if ctx.mode(problem) == Mode::Direct {
        return Err(CliError::invalid(
            "this command needs ray enumeration; --mode direct does not apply",
        ));
    }
    Ok(class_rays(&problem.class, &ctx.ray_options())?)
}

fn ray_diagnostics(ctx: &Ctx, rays: &RayMatrix) -> Diagnostics {
    Diagnostics {
        dd_intermediate_counts: Some(rays.stats().intermediate_counts.clone()),
        adjacency_tests: Some(rays.stats().adjacency_tests),
        ..ctx.diagnostics()
    }
}

fn rays_csv(ctx: &Ctx, rays: &RayMatrix) -> String {
    let m = rays.dimension();
    let mut out = String::from("x");
    for k in 1..=rays.len() {
        out.push_str(&format!(",r{k}"));
    }
    out.push('\n');
    for j in row_order(m, ctx.args.paper_order) {
        out.push_str(&point(m, j).iter().map(u8::to_string).collect::<String>());
        for col in rays.columns() {
            out.push(',');
            out.push_str(&format_rational(&col.values()[j]));
        }
        out.push('\n');
    }
    out
}

fn rays(ctx: &Ctx, problem: &Problem) -> Result<Outcome, CliError> {
    let rays = enumerate(ctx, problem)?;
    let mut report = ctx.with_support(ctx.base("rays", &problem.class));
    report.ray_count = Some(rays.len());
    report.rays = Some(
        rays.columns()
            .iter()
            .map(|f| ctx.support_vector(f.values()))
            .collect(),
    );
    report.diagnostics = ray_diagnostics(ctx, &rays);
    Ok(Outcome {
        csv: Some(rays_csv(ctx, &rays)),
        report,
        code: EXIT_OK,
    })
}

fn bounds(ctx: &Ctx, problem: &Problem) -> Result<Outcome, CliError> {
    let rays = enumerate(ctx, problem)?;
    let places = ctx.places();
    let mut report = ctx.base("bounds", &problem.class);
    report.ray_count = Some(rays.len());
    report.bounds = Some(
        pair_bounds(&problem.class, &rays)?
            .into_iter()
            .map(|b| PairBoundReport {
                i: b.i + 1,
                j: b.j + 1,
                moment_lo: Scalar::new(&b.moment_lo, places),
                moment_hi: Scalar::new(&b.moment_hi, places),
                rho_lo: Scalar::from_sqrt(&b.rho_lo, places),
                rho_hi: Scalar::from_sqrt(&b.rho_hi, places),
                lo_ray: b.lo_ray + 1,
                hi_ray: b.hi_ray + 1,
            })
            .collect(),
    );
    report.diagnostics = ray_diagnostics(ctx, &rays);
    Ok(Outcome {
        report,
        csv: None,
        code: EXIT_OK,
    })
}

fn certificate_report(
    fit: &FitResult,
    cert: &FarkasCertificate,
    variable: &str,
) -> CertificateReport {
    CertificateReport {
        statement: format!(
            "with A {variable} = b the stated system, y^T A >= 0 componentwise and y^T b < 0, \
             so no {variable} >= 0 satisfies it"
        ),
        rows: fit
            .system
            .labels
            .iter()
            .zip(&cert.y)
            .map(|(label, y)| CertificateRow {
                label: label.clone(),
                y: format_rational(y),
            })
            .collect(),
        verified: cert.verify(&fit.system.a, &fit.system.b),
    }
}

fn fit_outcome(
    ctx: &Ctx,
    problem: &Problem,
    command: &str,
    fit: FitResult,
    variable: &str,
) -> Outcome {
    let places = ctx.places();
    let mut report = ctx.base(command, &problem.class);
    report.status = if fit.is_feasible() {
        "feasible"
    } else {
        "infeasible"
    }
    .into();
    if let Some(f) = &fit.density {
        report.density = Some(ctx.support_vector(f.values()));
        report = ctx.with_support(report);
    }
    report.lambda = fit.lambda.as_ref().map(|l| Vector::new(l, places));
    report.objective = fit.objective.as_ref().map(|o| Scalar::new(o, places));
    report.certificate = fit
        .certificate
        .as_ref()
        .map(|c| certificate_report(&fit, c, variable));
    report.diagnostics = Diagnostics {
        pivots: Some(fit.pivots),
        ..ctx.diagnostics()
    };
    Outcome {
        report,
        csv: None,
        code: if fit.is_feasible() {
            EXIT_OK
        } else {
            EXIT_INFEASIBLE
        },
    }
}

fn required_mu2(problem: &Problem) -> Result<frechet_core::model::PairMoments, CliError> {
    problem
        .mu2()?
        .ok_or_else(|| CliError::invalid("the problem file needs rho or mu2 targets"))
}

fn fit(ctx: &Ctx, problem: &Problem) -> Result<Outcome, CliError> {
    if problem.options.objective == Some(Objective::MinHigherMoments) {
        return minimize(ctx, problem);
    }
    let mu2 = required_mu2(problem)?;
    match ctx.mode(problem) {
        Mode::Rays => {
            let rays = class_rays(&problem.class, &ctx.ray_options())?;
            let fit = fit_lambda(&rays, &mu2)?;
            let mut outcome = fit_outcome(ctx, problem, "fit", fit, "lambda");
            outcome.report.ray_count = Some(rays.len());
            Ok(outcome)
        }
        Mode::Direct => {
            let fit = fit_density_direct(&problem.class, &mu2)?;
            Ok(fit_outcome(ctx, problem, "fit", fit, "f"))
        }
    }
}

fn minimize(ctx: &Ctx, problem: &Problem) -> Result<Outcome, CliError> {
    let mu2 = required_mu2(problem)?;
    let fit = minimize_higher_moments(&problem.class, &mu2)?;
    Ok(fit_outcome(ctx, problem, "minimize", fit, "f"))
}

fn pair_values(m: usize, values: &[Rational], exact: bool, places: usize) -> Vec<PairValue> {
    pairs(m)
        .into_iter()
        .zip(values)
        .map(|((i, j), v)| PairValue {
            i: i + 1,
            j: j + 1,
            value: Scalar {
                is_exact: exact,
                ..Scalar::new(v, places)
            },
        })
        .collect()
}

fn nearest(ctx: &Ctx, problem: &Problem) -> Result<Outcome, CliError> {
    let rays;
    let source = match ctx.mode(problem) {
        Mode::Rays => {
            rays = class_rays(&problem.class, &ctx.ray_options())?;
            ProjectionSource::Rays(&rays)
        }
        Mode::Direct => ProjectionSource::Direct,
    };
    let result = match &problem.target {
        Some(Target::Rho(rho)) => nearest_feasible_correlation(&problem.class, rho, source)?,
        Some(Target::Mu2(mu2)) => nearest_feasible_moments(&problem.class, mu2, source)?,
        None => {
            return Err(CliError::invalid(
                "the problem file needs rho or mu2 targets",
            ))
        }
    };
    let places = ctx.places();
    let m = problem.m();
    let feasible = result.distance_squared == Rational::from_integer(0.into());
    let mut report = ctx.with_support(ctx.base("nearest", &problem.class));
    report.status = if feasible { "feasible" } else { "infeasible" }.into();
    let rho_exact = result.exact || (feasible && matches!(problem.target, Some(Target::Rho(_))));
    report.rho_star = Some(pair_values(m, result.rho_star.values(), rho_exact, places));
    report.mu2_star = Some(pair_values(
        m,
        result.mu2_star.values(),
        result.exact,
        places,
    ));
    report.distance = Some(DistanceReport {
        squared: Scalar {
            is_exact: result.exact,
            ..Scalar::new(&result.distance_squared, places)
        },
        value: result.distance,
    });
    if result.vertices.is_empty() {
        report.lambda = Some(Vector::new(&result.lambda, places));
    }
    report.density = Some(ctx.support_vector(result.density.values()));
    report.diagnostics = Diagnostics {
        iterations: Some(result.iterations),
        ..ctx.diagnostics()
    };
    Ok(Outcome {
        report,
        csv: None,
        code: EXIT_OK,
    })
}

/// Reads a density from a report (honouring its `support_order`) or from a
/// bare array in canonical order.
fn load_density(text: &str) -> Result<Density, CliError> {
    let bad = |msg: &str| CliError::invalid(format!("density file: {msg}"));
    let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let (cells, paper) = match &value {
        Value::Array(cells) => (cells.clone(), false),
        Value::Object(obj) => {
            let exact = obj
                .get("density")
                .and_then(|d| d.get("exact"))
                .and_then(Value::as_array)
                .ok_or_else(|| bad("no density.exact array"))?;
            let paper = obj
                .get("support_order")
                .and_then(|s| s.get("name"))
                .and_then(Value::as_str)
                == Some("paper");
            (exact.clone(), paper)
        }
        _ => return Err(bad("expected an array or a report object")),
    };
    let values = cells
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let text = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad(&format!("entry {k} is not a number"))),
            };
            parse_rational(&text).map_err(|e| bad(&format!("entry {k}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let values = if paper && values.len().is_power_of_two() {
        let top = values.len() - 1;
        (0..=top).map(|j| values[top ^ j].clone()).collect()
    } else {
        values
    };
    Ok(Density::new(values)?)
}

fn density_and_class(ctx: &Ctx) -> Result<(Density, FrechetClass, Option<Problem>), CliError> {
    let problem = ctx
        .args
        .input
        .as_ref()
        .map(|_| load_problem(ctx.args))
        .transpose()?;
    let density = match &ctx.args.density {
        Some(path) => load_density(&read_file(path)?)?,
        None => {
            let problem = problem
                .as_ref()
                .ok_or_else(|| CliError::invalid("--density or --input is required"))?;
            let mu2 = required_mu2(problem)?;
            let fit = match ctx.mode(problem) {
                Mode::Rays => fit_lambda(&class_rays(&problem.class, &ctx.ray_options())?, &mu2)?,
                Mode::Direct => fit_density_direct(&problem.class, &mu2)?,
            };
            fit.density.ok_or(CliError {
                code: EXIT_INFEASIBLE,
                message: "the targets are infeasible; nothing to sample".into(),
            })?
        }
    };
    let class = match &problem {
        Some(problem) => {
            if problem.m() != density.dimension() {
                return Err(CliError::invalid(format!(
                    "density has dimension {} but the problem has m = {}",
                    density.dimension(),
                    problem.m()
                )));
            }
            problem.class.clone()
        }
        None => FrechetClass::new(density.margins())?,
    };
    Ok((density, class, problem))
}

fn theta(ctx: &Ctx) -> Result<Outcome, CliError> {
    if ctx.args.density.is_none() {
        return Err(CliError::invalid("theta needs --density <file>"));
    }
    let (density, class, _) = density_and_class(ctx)?;
    let theta = theta_from_density(&class, &density)?;
    let m = class.dimension();
    let places = ctx.places();
    let mut entries = Vec::with_capacity(1 << m);
    for k in 0..=m {
        for alpha in subsets_of_order(m, k) {
            entries.push(ThetaEntry {
                alpha: (0..m)
                    .filter(|i| alpha >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect(),
                value: Scalar::new(&theta.values()[alpha], places),
            });
        }
    }
    let mut report = ctx.base("theta", &class);
    report.theta = Some(ThetaReport {
        entries,
        class_conditions: theta.satisfies_class_conditions(),
    });
    report.diagnostics = ctx.diagnostics();
    Ok(Outcome {
        report,
        csv: None,
        code: EXIT_OK,
    })
}

fn sample_command(ctx: &Ctx) -> Result<Outcome, CliError> {
    let (density, class, problem) = density_and_class(ctx)?;
    let options = problem.map(|p| p.options).unwrap_or_default();
    let n = ctx.args.n.or(options.n).unwrap_or(DEFAULT_SAMPLE_SIZE);
    let seed = ctx.args.seed.or(options.seed).unwrap_or(0);
    let batch = sample(&density, n, seed)?;
    let m = density.dimension();
    let places = ctx.places();

    let margins = density.margins();
    let pair_moments = density.pair_moments();
    let targets = margins
        .iter()
        .enumerate()
        .map(|(i, v)| (vec![i + 1], v.clone()))
        .chain(
            pairs(m)
                .into_iter()
                .zip(pair_moments.values())
                .map(|((i, j), v)| (vec![i + 1, j + 1], v.clone())),
        );
    let empirical = empirical_moments(&batch, 1)?
        .into_iter()
        .chain(empirical_moments(&batch, 2)?);
    let moments: Vec<MomentCheck> = targets
        .zip(empirical)
        .map(|((index, target), emp)| {
            let mu = to_f64(&target);
            let standard_error = (mu * (1.0 - mu) / n as f64).sqrt();
            let diff = to_f64(&emp) - mu;
            let z = if standard_error > 0.0 {
                diff / standard_error
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            MomentCheck {
                index,
                target: Scalar::new(&target, places),
                empirical: Scalar::new(&emp, places),
                standard_error,
                z,
            }
        })
        .collect();

    let counts = batch.counts();
    let mut report = ctx.with_support(ctx.base("sample", &class));
    report.density = Some(ctx.support_vector(density.values()));
    report.sample = Some(SampleReport {
        n,
        seed,
        generator_id: batch.generator_id.clone(),
        counts: row_order(m, ctx.args.paper_order)
            .into_iter()
            .map(|j| counts[j])
            .collect(),
        within_4_se: moments.iter().all(|c| c.z.abs() < 4.0),
        moments,
    });
    report.diagnostics = ctx.diagnostics();
    Ok(Outcome {
        report,
        csv: Some(batch.to_csv()),
        code: EXIT_OK,
    })
}
