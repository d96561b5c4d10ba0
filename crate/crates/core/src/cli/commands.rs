use std::fs;
use std::io::{self, Write};

use super::parse::{parse_channel_arg, parse_counts, parse_grid, parse_vec3, parse_word};
use super::{emit, CliError, Cell, ChannelAction, ChannelArgs, Format, OutputArgs, Table, WalkArgs};
use crate::algebra::{bloch_to_density, herm_eigen4, BlochVector, DensityMatrix};
use crate::channel::spec::ChannelSpec;
use crate::channel::{analyze, choi, krsw_cp_conditions, AssumptionA, Channel, ChannelAnalysis, ChannelError};
use crate::walk::{
    clt_diagnostic, exact_distribution, lambda_limit, lambda_n, ldp_diagnostic_tail, ordered_wick_moment,
    site_laws, symmetrized_expectation, wick_moment_windows, word_expectation, Direction, Letter, RateFunction,
    Tail, WalkError, WalkSpec, Window, WordSpec,
};

/// Choi eigenvalues at or above `−CP_TOL` count as nonnegative.
const CP_TOL: f64 = 1e-10;

fn load(args: &ChannelArgs) -> Result<(Channel, Option<DensityMatrix>), CliError> {
    let channel = parse_channel_arg(&args.channel)?.build()?;
    let rho0 = match &args.initial_state {
        Some(s) => {
            let r = BlochVector::from_array(parse_vec3(s)?);
            Some(bloch_to_density(r).map_err(|e| CliError::Usage(format!("--initial-state: {e}")))?)
        }
        None => None,
    };
    Ok((channel, rho0))
}

fn walk_spec(channel: &Channel, rho0: Option<DensityMatrix>, n: usize) -> Result<WalkSpec, CliError> {
    Ok(match rho0 {
        Some(rho) => WalkSpec::new(channel.clone(), rho, n)?,
        None => WalkSpec::stationary(channel.clone(), n)?,
    })
}

fn single_n(args: &WalkArgs) -> Result<usize, CliError> {
    match parse_counts(&args.n)?.as_slice() {
        [n] => Ok(*n),
        _ => Err(CliError::Usage("this command takes a single --n".into())),
    }
}

fn required_grid(grid: &Option<String>, flag: &str) -> Result<Vec<f64>, CliError> {
    match grid {
        Some(s) => parse_grid(s),
        None => Err(CliError::Usage(format!("{flag} is required"))),
    }
}

fn warn_if_not_geometric(a: &ChannelAnalysis) {
    if a.assumption_a == AssumptionA::FailsSpectralRadiusOne {
        eprintln!(
            "warning: spectral radius {} is not below 1; the limit depends on the initial state",
            a.spectral_radius
        );
    }
}

fn write_text(text: &str, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

const AXES: [&str; 3] = ["x", "y", "z"];

pub(super) fn channel(action: ChannelAction) -> Result<(), CliError> {
    match action {
        ChannelAction::Show(args) => show(&args),
        ChannelAction::CheckCp(args) => check_cp(&args),
        ChannelAction::Fixpoint(args) => fixpoint(&args),
        ChannelAction::Analyze(args) => analyze_cmd(&args),
    }
}

fn show(args: &ChannelArgs) -> Result<(), CliError> {
    let (ch, _) = load(args)?;
    let affine = ch.affine();
    if args.output.format == Format::Json {
        return write_text(&ChannelSpec::affine_of(&affine).to_json(), &args.output);
    }
    let mut table = Table::new(&["row", "T_x", "T_y", "T_z", "t"]);
    for (i, axis) in AXES.iter().enumerate() {
        let r = affine.t_lin()[i];
        table.push(vec![
            Cell::from(*axis),
            r[0].into(),
            r[1].into(),
            r[2].into(),
            affine.t_vec()[i].into(),
        ]);
    }
    emit(&table, &args.output)
}

fn check_cp(args: &ChannelArgs) -> Result<(), CliError> {
    let (ch, _) = load(args)?;
    let ev = herm_eigen4(&choi(&ch)?).map_err(ChannelError::from)?;
    let mut table = Table::key_value();
    for (i, e) in ev.iter().enumerate() {
        table.entry(format!("choi_eigenvalue_{}", i + 1), *e);
    }
    table.entry("completely_positive", ev[3] >= -CP_TOL);
    if let Channel::Krsw(k) = &ch {
        match krsw_cp_conditions(k) {
            Ok(r) => {
                table.entry("krsw_cond1", r.cond1);
                table.entry("krsw_cond2", r.cond2);
                table.entry("krsw_cond3", r.cond3);
                table.entry("krsw_verdict", r.verdict());
            }
            Err(ChannelError::Inapplicable(reach)) => {
                table.entry("krsw_verdict", format!("inapplicable: |t3| + |lambda3| = {reach:?}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(&table, &args.output)
}

fn stationary(args: &ChannelArgs) -> Result<(ChannelAnalysis, bool), CliError> {
    let (ch, rho0) = load(args)?;
    match analyze(&ch, None) {
        Ok(a) => Ok((a, true)),
        Err(ChannelError::NonUniqueFixedPoint(det)) => match rho0 {
            Some(rho) => Ok((analyze(&ch, Some(&rho))?, false)),
            None => Err(ChannelError::NonUniqueFixedPoint(det).into()),
        },
        Err(e) => Err(e.into()),
    }
}

fn push_vector(table: &mut Table, a: &ChannelAnalysis) {
    for (axis, x) in AXES.iter().zip(a.v.to_array()) {
        table.entry(format!("v_{axis}"), x);
    }
}

fn fixpoint(args: &ChannelArgs) -> Result<(), CliError> {
    let (a, unique) = stationary(args)?;
    let mut table = Table::key_value();
    table.entry("unique", unique);
    push_vector(&mut table, &a);
    table.entry("rho_00", a.rho_inf.alpha());
    table.entry("rho_01_re", a.rho_inf.beta().re);
    table.entry("rho_01_im", a.rho_inf.beta().im);
    emit(&table, &args.output)
}

fn analyze_cmd(args: &ChannelArgs) -> Result<(), CliError> {
    let (a, unique) = stationary(args)?;
    let mut table = Table::key_value();
    table.entry("unique", unique);
    push_vector(&mut table, &a);
    for (i, ai) in AXES.iter().enumerate() {
        for (j, aj) in AXES.iter().enumerate() {
            table.entry(format!("C_{ai}{aj}"), a.covariance[i][j]);
        }
    }
    table.entry("spectral_radius", a.spectral_radius);
    let verdict = match a.assumption_a {
        AssumptionA::HoldsGeometric => "holds_geometric",
        AssumptionA::FailsSpectralRadiusOne => "fails_spectral_radius_one",
    };
    table.entry("assumption_a", verdict);
    emit(&table, &args.output)
}

pub(super) fn dist(args: &WalkArgs) -> Result<(), CliError> {
    let (ch, rho0) = load(&args.channel)?;
    let spec = walk_spec(&ch, rho0, single_n(args)?)?;
    let nu = parse_vec3(&args.nu)?;
    let dir = if args.centered {
        Direction::centered(nu, spec.analysis()?.v)?
    } else {
        Direction::raw(nu)?
    };
    let law = site_laws(&spec, &dir, &Window::up_to(args.t)?)?;
    let d = exact_distribution(&law);
    let mut table = Table::new(&["value", "probability"]);
    for (s, w) in d.weights.iter().enumerate() {
        table.push(vec![d.value(s).into(), (*w).into()]);
    }
    emit(&table, &args.channel.output)
}

pub(super) fn clt(args: &WalkArgs) -> Result<(), CliError> {
    let (ch, rho0) = load(&args.channel)?;
    let nu = parse_vec3(&args.nu)?;
    let mut table = Table::new(&["n", "ks_distance", "target_variance"]);
    for (i, n) in parse_counts(&args.n)?.into_iter().enumerate() {
        let spec = walk_spec(&ch, rho0, n)?;
        if i == 0 {
            warn_if_not_geometric(&spec.analysis()?);
        }
        let r = clt_diagnostic(&spec, nu, args.t)?;
        table.push(vec![n.into(), r.ks_distance.into(), r.target_variance.into()]);
    }
    emit(&table, &args.channel.output)
}

pub(super) fn ldp(args: &WalkArgs) -> Result<(), CliError> {
    let (ch, rho0) = load(&args.channel)?;
    let spec = walk_spec(&ch, rho0, single_n(args)?)?;
    warn_if_not_geometric(&spec.analysis()?);
    let nu = parse_vec3(&args.nu)?;
    let mut table = Table::new(&["x", "empirical_rate", "limit_rate"]);
    for x in required_grid(&args.x_grid, "--x-grid")? {
        let r = match ldp_diagnostic_tail(&spec, nu, x, Tail::Upper) {
            Err(WalkError::WrongTail { .. }) => ldp_diagnostic_tail(&spec, nu, x, Tail::Lower)?,
            other => other?,
        };
        table.push(vec![x.into(), r.empirical_rate.into(), r.limit_rate.into()]);
    }
    emit(&table, &args.channel.output)
}

pub(super) fn lambda(args: &WalkArgs) -> Result<(), CliError> {
    let (ch, rho0) = load(&args.channel)?;
    let spec = walk_spec(&ch, rho0, single_n(args)?)?;
    let a = spec.analysis()?;
    warn_if_not_geometric(&a);
    let nu = parse_vec3(&args.nu)?;
    let rf = RateFunction::new(nu, a.v)?;
    let mut table = Table::new(&["t", "lambda_n", "lambda_limit"]);
    for t in required_grid(&args.t_grid, "--t-grid")? {
        table.push(vec![t.into(), lambda_n(&spec, nu, t)?.into(), lambda_limit(&rf, t).into()]);
    }
    emit(&table, &args.channel.output)
}

pub(super) fn moments(args: &WalkArgs) -> Result<(), CliError> {
    if args.word.is_empty() {
        return Err(CliError::Usage("--word is required".into()));
    }
    let (ch, rho0) = load(&args.channel)?;
    let counts = parse_counts(&args.n)?;
    let a = walk_spec(&ch, rho0, counts[0])?.analysis()?;
    warn_if_not_geometric(&a);
    let default_window = Window::up_to(args.t)?;
    let mut table = Table::new(&["word", "n", "re", "im", "limit_re", "limit_im"]);
    for text in &args.word {
        let parsed = parse_word(text)?;
        let pairs: Vec<(usize, Window)> = parsed
            .iter()
            .map(|l| (l.component, l.window.unwrap_or(default_window)))
            .collect();
        let letters = pairs
            .iter()
            .map(|&(c, window)| {
                let mut nu = [0.0; 3];
                nu[c] = 1.0;
                Ok(Letter {
                    dir: Direction::centered(nu, a.v)?,
                    window,
                })
            })
            .collect::<Result<Vec<_>, WalkError>>()?;
        let word = WordSpec::new(letters)?;
        let limit = if args.symmetrized {
            wick_moment_windows(&a.covariance, &pairs).into()
        } else {
            ordered_wick_moment(a.v, &pairs)
        };
        for &n in &counts {
            let spec = walk_spec(&ch, rho0, n)?;
            let value = if args.symmetrized {
                symmetrized_expectation(&spec, &word)?.into()
            } else {
                word_expectation(&spec, &word)?
            };
            table.push(vec![
                text.as_str().into(),
                n.into(),
                value.re.into(),
                value.im.into(),
                limit.re.into(),
                limit.im.into(),
            ]);
        }
    }
    emit(&table, &args.channel.output)
}
