use std::fs;

use num_complex::Complex64;
use serde_json::{json, Value};

use spinqec::codes::{
    catalog_code, generate_code, multi_qudit_code, verify_kl, CodeFamily, CodePair,
    CodewordDocument, KlReport, MultiQuditCode, OperatorChoice,
};
use spinqec::noise::{corrupt_state, ErrorKind, PulseErrorKind};
use spinqec::protocol::{
    branch_pair, fidelity_sweep, loglog_slope, sweep_to_csv, threshold_crossings,
    threshold_estimate, CycleConfig, MeasurementCascade, Protocol, Qubit, SweepConfig, SweepMode,
    SweepRow,
};
use spinqec::pulses::{run_sequence, sequence_to_json, trace_to_csv, PulseAlphabet, PulseSequence};
use spinqec::resources::{comparison_table, table_to_csv, table_to_text};
use spinqec::spin::{Ket, Spin};

use crate::grid::parse_grid;
use crate::output::{self, Metadata};
use crate::{
    CliError, CodegenArgs, Context, DataFormat, Mode, Operators, ResourcesArgs, SequenceArgs,
    SimulateArgs, TableFormat, VerifyArgs, Which,
};

type CliResult = Result<(), CliError>;

fn parse<T: std::str::FromStr<Err = spinqec::Error>>(text: &str) -> Result<T, CliError> {
    text.parse::<T>().map_err(CliError::from)
}

fn operator_choice(requested: Operators, code: &CodePair) -> OperatorChoice {
    match requested {
        Operators::Single => OperatorChoice::SingleSpin,
        Operators::Collective => OperatorChoice::Collective,
        Operators::Auto if code.system().is_single() => OperatorChoice::SingleSpin,
        Operators::Auto => OperatorChoice::Collective,
    }
}

/// `-5/2` style label for a magnetic quantum number.
fn level_label(m: f64) -> String {
    let twice = (2.0 * m).round() as i64;
    if twice % 2 == 0 {
        format!("{:+}", twice / 2)
    } else {
        format!("{twice:+}/2")
    }
}

fn levels_label(levels: &[f64]) -> String {
    levels
        .iter()
        .map(|&m| level_label(m))
        .collect::<Vec<_>>()
        .join(",")
}

fn print_codeword(code: &CodePair, label: &str, ket: &Ket) {
    let system = code.system();
    println!("{label}:");
    for i in CodePair::support(ket) {
        let a = ket.amplitude(i);
        println!(
            "  |{}>  amplitude {:+.12}{:+.12}i  |a|^2 {:.12}",
            levels_label(&system.levels(i)),
            a.re,
            a.im,
            a.norm_sqr()
        );
    }
}

fn print_kl(report: &KlReport, operators: OperatorChoice) {
    println!(
        "KL conditions at order {} ({}): {}",
        report.order,
        match operators {
            OperatorChoice::SingleSpin => "single-spin operators",
            OperatorChoice::Collective => "collective operators",
        },
        if report.passed { "PASS" } else { "FAIL" }
    );
    println!(
        "  max cross violation {:.3e} (normalized {:.3e})",
        report.max_cross_violation, report.normalized_cross_violation
    );
    println!(
        "  max diagonal violation {:.3e} (normalized {:.3e})",
        report.max_diag_violation, report.normalized_diag_violation
    );
    println!(
        "  tolerance {:.1e}, error states orthonormal: {}",
        report.tolerance, report.gram_orthonormal
    );
}

pub fn codegen(ctx: &Context, args: &CodegenArgs) -> CliResult {
    let (code, stem) = if let Some(name) = &args.catalog {
        (catalog_code(name)?, name.clone())
    } else if let Some(name) = &args.multi {
        (
            multi_qudit_code(parse::<MultiQuditCode>(name)?),
            name.replace('/', "_"),
        )
    } else {
        let order = args
            .order
            .ok_or_else(|| CliError::Usage("--order is required".into()))?;
        let family = parse::<CodeFamily>(&args.family)?;
        let code = generate_code(order, family)?;
        let stem = format!("N{order}-d{}", code.system().dim());
        (code, stem)
    };
    let operators = operator_choice(args.operators, &code);
    let report = verify_kl(&code, code.order(), operators, args.tolerance)?;

    println!(
        "code {stem}: dimension {}, order {}",
        code.system().dim(),
        code.order()
    );
    print_codeword(&code, "|0_L>", code.zero_logical());
    print_codeword(&code, "|1_L>", code.one_logical());
    print_kl(&report, operators);

    let meta = Metadata::new(
        "codegen",
        ctx.seed,
        &json!({
            "order": args.order,
            "family": args.family,
            "catalog": args.catalog,
            "multi": args.multi,
            "operators": args.operators,
            "tolerance": args.tolerance,
        }),
    );
    let doc = CodewordDocument::from_code(&code, Some((&report, operators)));
    let value = serde_json::to_value(&doc).map_err(|e| CliError::Failed(e.to_string()))?;
    let path = output::resolve(
        &ctx.out_dir,
        args.output.as_ref(),
        &format!("codeword-{stem}.json"),
    );
    output::write_json(&path, &meta.attach(value))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "code {stem} fails its own order-{} conditions",
            code.order()
        )))
    }
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> CliResult {
    let (code, source) = if let Some(path) = &args.path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let doc = CodewordDocument::from_json(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let code = doc
            .to_code()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        (code, path.display().to_string())
    } else if let Some(name) = &args.catalog {
        (catalog_code(name)?, name.clone())
    } else {
        let name = args.multi.as_deref().unwrap_or_default();
        (
            multi_qudit_code(parse::<MultiQuditCode>(name)?),
            name.to_string(),
        )
    };
    let order = args.order.unwrap_or(code.order());
    let operators = operator_choice(args.operators, &code);
    let report = verify_kl(&code, order, operators, args.tolerance)?;

    println!(
        "{source}: dimension {}, declared order {}",
        code.system().dim(),
        code.order()
    );
    print_kl(&report, operators);

    if let Some(path) = &args.output {
        let meta = Metadata::new(
            "verify",
            ctx.seed,
            &json!({
                "source": source,
                "order": order,
                "operators": args.operators,
                "tolerance": args.tolerance,
            }),
        );
        let value = serde_json::to_value(&report).map_err(|e| CliError::Failed(e.to_string()))?;
        output::write_json(path, &meta.attach(value))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "conditions violated at order {order}"
        )))
    }
}

fn pair_ket(qubit: &Qubit, pair: (usize, usize)) -> Ket {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[pair.0] = qubit.alpha;
    amps[pair.1] = qubit.beta;
    Ket::new(amps)
}

fn print_state(spin: Spin, ket: &Ket) {
    for i in 0..ket.dim() {
        let a = ket.amplitude(i);
        if a.norm() > 1e-12 {
            println!(
                "  |{}>  {:+.12}{:+.12}i",
                level_label(spin.m(i)),
                a.re,
                a.im
            );
        }
    }
}

fn print_listing(seq: &PulseSequence, spin: Spin) {
    println!("{}: {} pulses", seq.name, seq.len());
    for (i, p) in seq.pulses.iter().enumerate() {
        println!(
            "  {:>3}  {:<22}  ({}, {})",
            i + 1,
            p.to_string(),
            level_label(spin.m(p.low)),
            level_label(spin.m(p.high))
        );
    }
}

pub fn sequence(ctx: &Context, args: &SequenceArgs) -> CliResult {
    let spin = Spin::from_twice(7)?;
    let alphabet = parse::<PulseAlphabet>(&args.alphabet)?;
    let protocol = Protocol::new(CycleConfig {
        alphabet,
        ..CycleConfig::default()
    })?;
    let inject = args.inject.as_deref().map(parse::<ErrorKind>).transpose()?;
    let seq = match args.which {
        Which::Enc => protocol.encoding(),
        Which::Dec => protocol.decoding(),
        Which::Reencode => protocol.reencoding(),
        Which::Correct => protocol.correction(inject.ok_or_else(|| {
            CliError::Usage("--which correct needs --inject to pick the branch".into())
        })?),
    };
    print_listing(seq, spin);

    let meta = Metadata::new(
        "sequence",
        ctx.seed,
        &json!({
            "which": args.which,
            "alphabet": alphabet,
            "alpha": args.alpha,
            "beta": args.beta,
            "phi": args.phi,
            "inject": inject,
            "trace": args.trace,
        }),
    );
    if let Some(path) = &args.json {
        let text = sequence_to_json(seq, spin)?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Failed(e.to_string()))?;
        output::write_json(path, &meta.attach(value))?;
    }

    let wants_state = args.alpha.is_some()
        || args.beta.is_some()
        || args.phi.is_some()
        || args.inject.is_some()
        || args.trace;
    if !wants_state {
        return Ok(());
    }
    let (alpha, beta) = match (args.alpha, args.beta) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, (1.0 - a * a).max(0.0).sqrt()),
        (None, Some(b)) => ((1.0 - b * b).max(0.0).sqrt(), b),
        (None, None) => (1.0, 0.0),
    };
    let qubit = Qubit::new(alpha, beta, args.phi.unwrap_or(0.0))?;
    let input = match args.which {
        Which::Enc => qubit.physical_ket(),
        Which::Dec => corrupt_state(
            &protocol.ideal_state(&qubit),
            inject.unwrap_or(ErrorKind::None),
        )?,
        Which::Reencode => pair_ket(&qubit, (0, 7)),
        Which::Correct => pair_ket(&qubit, branch_pair(inject.unwrap_or(ErrorKind::None))),
    };

    let run = run_sequence(seq, &input, args.trace)?;
    println!("input:");
    print_state(spin, &input);
    if let Some(trace) = &run.trace {
        for (i, (p, ket)) in seq.pulses.iter().zip(trace).enumerate() {
            println!("after pulse {} {}:", i + 1, p);
            print_state(spin, ket);
        }
    }
    for cp in &run.checkpoints {
        println!(
            "checkpoint {} after {} pulses: deviation {:.3e}",
            cp.branch, cp.after, cp.deviation
        );
    }
    println!("output:");
    print_state(spin, &run.output);

    if let Some(trace) = &run.trace {
        let name = match args.which {
            Which::Enc => "enc",
            Which::Dec => "dec",
            Which::Reencode => "reencode",
            Which::Correct => "correct",
        };
        let path = output::resolve(
            &ctx.out_dir,
            args.output.as_ref(),
            &format!("trace-{name}.csv"),
        );
        let text = meta.comment_block() + &trace_to_csv(&input, trace, spin);
        output::write(&path, &text)?;
    }
    Ok(())
}

fn grid(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(text).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn print_summary(rows: &[SweepRow], fidelities: &[f64]) {
    for &f in fidelities {
        let points: Vec<&SweepRow> = rows.iter().filter(|r| r.pulse_fidelity == f).collect();
        let fit = |value: fn(&SweepRow) -> f64| {
            let xy: Vec<(f64, f64)> = points
                .iter()
                .filter(|r| value(r) > 0.0)
                .map(|r| (r.t_over_t, value(r)))
                .collect();
            loglog_slope(&xy)
        };
        let show = |s: Option<f64>| s.map_or("n/a".to_string(), |s| format!("{s:.3}"));
        println!(
            "pulse fidelity {f}: corrected infidelity slope {}, uncorrected slope {}",
            show(fit(SweepRow::corrected_infidelity)),
            show(fit(SweepRow::uncorrected_infidelity))
        );
    }
    for (t, crossing) in threshold_crossings(rows) {
        match crossing {
            Some(f) => println!("t/T = {t}: gain reaches 1 at pulse fidelity {f:.5}"),
            None => println!("t/T = {t}: gain stays below 1 on the grid"),
        }
    }
    match threshold_estimate(rows) {
        Some(f) => println!("threshold estimate: pulse fidelity {f:.5}"),
        None => println!("threshold estimate: not bracketed by the grid"),
    }
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> CliResult {
    let t_over_t = grid(&args.t_over_t, "t-over-T")?;
    let pulse_fidelities = grid(&args.pulse_fidelity, "pulse-fidelity")?;
    let config = SweepConfig {
        t_over_t,
        pulse_fidelities: pulse_fidelities.clone(),
        model: parse::<PulseErrorKind>(&args.model)?,
        trials: args.trials as usize,
        seed: ctx.seed,
        mode: match args.mode {
            Mode::MonteCarlo => SweepMode::MonteCarlo,
            Mode::Exact => SweepMode::Exact,
        },
        cycle: CycleConfig {
            alphabet: parse::<PulseAlphabet>(&args.alphabet)?,
            cascade: parse::<MeasurementCascade>(&args.cascade)?,
            relaxation_order: args.relaxation_order,
            ancilla: args.ancilla,
        },
    };
    let rows = fidelity_sweep(&config)?;
    print_summary(&rows, &pulse_fidelities);

    let meta = Metadata::new("simulate", ctx.seed, &config);
    match args.format {
        DataFormat::Csv => {
            let path = output::resolve(&ctx.out_dir, args.output.as_ref(), "sweep.csv");
            output::write(&path, &(meta.comment_block() + &sweep_to_csv(&rows)))
        }
        DataFormat::Json => {
            let path = output::resolve(&ctx.out_dir, args.output.as_ref(), "sweep.json");
            output::write_json(&path, &meta.attach(json!({ "rows": rows })))
        }
    }
}

pub fn resources(ctx: &Context, args: &ResourcesArgs) -> CliResult {
    let rows = comparison_table(args.max_order)?;
    let meta = Metadata::new(
        "resources",
        ctx.seed,
        &json!({ "max_order": args.max_order, "format": args.format }),
    );
    let text = match args.format {
        TableFormat::Text => table_to_text(&rows),
        TableFormat::Csv => meta.comment_block() + &table_to_csv(&rows),
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&meta.attach(json!({ "rows": rows })))
                .map_err(|e| CliError::Failed(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    print!("{text}");
    if let Some(path) = &args.output {
        output::write(path, &text)?;
    }
    Ok(())
}
