use std::fmt::Write as _;
use std::fs;
use std::io::Read;

use serde_json::{json, Value};

use lcbound_core::ledger::minimum_of;
use lcbound_core::nn::{
    bound_point, crossover_threshold_with_inputs, scan_comparison, shelves_p1, shelves_p2,
    ComparisonRow, NnError, Point, INDEPENDENCE_NOTE,
};
use lcbound_core::verify::run_verification;
use lcbound_core::{
    chart_candidates, compute_bound, ActivationSupport, NetworkShape, ProblemSpec, Rational,
};

use crate::record::{ResultRecord, DECIMAL_DIGITS};
use crate::spec_file::{
    ActivationFamily, ActivationSpec, GenericSpec, InfiniteTail, NetworkSpec, PointName,
    ShelfEntry, SpecFile, TailFamily, TailParams,
};
use crate::{
    Activation, Cli, CliError, Command, ErrorKind, Format, NetworkArgs, Outcome, PointArg,
    SpecSource,
};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SCAN_MAX: u64 = 50;
pub const FIGURE_SPAN: u64 = 40;

const GENERIC_NOTE: &str = "exact evaluation of the counting rule for the given shelves";

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Bound(source) => {
            let record = match load_spec(source)? {
                SpecFile::Generic(spec) => generic_record(&spec)?,
                SpecFile::Network(net) => network_record(&net)?,
            };
            Ok(Outcome::ok(render_record(&record, format)))
        }
        Command::NnBound { network, point } => {
            let net = network_spec(network, *point);
            Ok(Outcome::ok(render_record(&network_record(&net)?, format)))
        }
        Command::Compare {
            inputs,
            outputs,
            true_hidden,
            activation,
            exponents,
        } => {
            let support = activation_spec(*activation, exponents.clone()).to_support()?;
            let scan_max = cli.scan_max.unwrap_or(DEFAULT_SCAN_MAX);
            compare(&support, *inputs, *outputs, *true_hidden, scan_max, format).map(Outcome::ok)
        }
        Command::Figure {
            true_hidden,
            inputs,
            outputs,
            hidden_max,
        } => {
            let hidden_max = hidden_max.unwrap_or(true_hidden + FIGURE_SPAN);
            figure(*true_hidden, *inputs, outputs, hidden_max, format).map(Outcome::ok)
        }
        Command::Ledger(source) => {
            let spec = match load_spec(source)? {
                SpecFile::Generic(spec) => spec.to_problem()?,
                SpecFile::Network(net) => network_problem(&net)?,
            };
            ledger(&spec, format).map(Outcome::ok)
        }
        Command::Verify { cases, max_shelves } => Ok(verify(
            *cases,
            cli.seed.unwrap_or(DEFAULT_SEED),
            *max_shelves,
            format,
        )),
    }
}

fn read_source(path: &std::path::Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io(format!("cannot read standard input: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn parse_shelves(text: &str) -> Result<Vec<ShelfEntry>, CliError> {
    let bad = || {
        CliError::validation(
            "InvalidShelves",
            format!("expected m:n pairs like 1:1,3:2, got {text:?}"),
        )
    };
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|pair| {
            let (m, n) = pair.trim().split_once(':').ok_or_else(bad)?;
            Ok(ShelfEntry {
                m: m.trim().parse().map_err(|_| bad())?,
                n: n.trim().parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn load_spec(source: &SpecSource) -> Result<SpecFile, CliError> {
    let inline = source.r.is_some()
        || source.alpha.is_some()
        || source.beta.is_some()
        || source.shelves.is_some()
        || source.tail.is_some();
    if let Some(path) = &source.spec {
        if inline {
            return Err(CliError::validation(
                "ConflictingInput",
                "give either a spec file or inline fields, not both",
            ));
        }
        return SpecFile::parse(&read_source(path)?);
    }
    let need = |v: Option<i64>, name: &str| {
        v.ok_or_else(|| {
            CliError::validation("MissingField", format!("missing --{name} (or a spec file)"))
        })
    };
    let family = match source.tail.as_deref() {
        None => None,
        Some("exp") => Some(TailFamily::Exp),
        Some("swish") => Some(TailFamily::Swish),
        Some("odd") => Some(TailFamily::Odd),
        Some(_) => Some(TailFamily::Arithmetic),
    };
    let infinite_tail = family.map(|family| {
        let params = TailParams {
            start: source.tail_start,
            step: source.tail_step,
            n: source.tail_n,
        };
        InfiniteTail {
            family,
            params: (params != TailParams::default()).then_some(params),
        }
    });
    Ok(SpecFile::Generic(GenericSpec {
        r: need(source.r, "r")?,
        alpha: need(source.alpha, "alpha")?,
        beta: need(source.beta, "beta")?,
        shelves: parse_shelves(source.shelves.as_deref().unwrap_or(""))?,
        infinite_tail,
    }))
}

fn activation_spec(activation: Activation, exponents: Option<Vec<u64>>) -> ActivationSpec {
    let family = match activation {
        Activation::Exp => ActivationFamily::Exp,
        Activation::Swish => ActivationFamily::Swish,
        Activation::Tanh => ActivationFamily::Tanh,
        Activation::Poly => ActivationFamily::Poly,
        Activation::Custom => ActivationFamily::Custom,
    };
    ActivationSpec { family, exponents }
}

fn network_spec(args: &NetworkArgs, point: PointArg) -> NetworkSpec {
    NetworkSpec {
        inputs: args.inputs as i64,
        hidden: args.hidden as i64,
        outputs: args.outputs as i64,
        true_hidden: args.true_hidden as i64,
        activation: activation_spec(args.activation, args.exponents.clone()),
        point: match point {
            PointArg::P1 => PointName::P1,
            PointArg::P2 => PointName::P2,
        },
    }
}

fn generic_record(spec: &GenericSpec) -> Result<ResultRecord, CliError> {
    let result = compute_bound(&spec.to_problem()?)?;
    let provenance = SpecFile::Generic(spec.clone()).to_value();
    Ok(ResultRecord::new(&result, GENERIC_NOTE, provenance))
}

fn network_problem(net: &NetworkSpec) -> Result<ProblemSpec, CliError> {
    let shape = net.shape()?;
    let support = net.activation.to_support()?;
    let spec = match Point::from(net.point) {
        Point::P1 => shelves_p1(&shape, &support)?,
        Point::P2 => shelves_p2(&shape)?,
    };
    Ok(spec)
}

fn network_record(net: &NetworkSpec) -> Result<ResultRecord, CliError> {
    let shape = net.shape()?;
    let support = net.activation.to_support()?;
    let result = bound_point(&shape, &support, net.point.into())?;
    let spec = network_problem(net)?;
    let shelves: Vec<Value> = spec
        .shelves
        .prefix(result.l)
        .iter()
        .map(|s| json!({"m": s.price, "n": s.inventory}))
        .collect();
    let provenance = json!({
        "spec": SpecFile::Network(net.clone()).to_value(),
        "tuple": {"r": spec.rank, "alpha": spec.demand, "beta": spec.budget, "shelves": shelves},
    });
    Ok(ResultRecord::new(&result, INDEPENDENCE_NOTE, provenance))
}

fn render_record(record: &ResultRecord, format: Format) -> String {
    match format {
        Format::Text => record.to_text(),
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    }
}

fn decimal(x: &Rational) -> String {
    x.to_significant(DECIMAL_DIGITS)
}

fn to_pretty_json(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("values serialize");
    out.push('\n');
    out
}

fn show_option(v: Option<u64>) -> String {
    v.map_or_else(|| "none".to_string(), |t| t.to_string())
}

struct CrossoverSummary {
    threshold: Option<u64>,
    strict_threshold: Option<u64>,
    flips: usize,
}

pub fn compare(
    support: &ActivationSupport,
    inputs: u64,
    outputs: u64,
    true_hidden: u64,
    scan_max: u64,
    format: Format,
) -> Result<String, CliError> {
    if scan_max == 0 {
        return Err(CliError::validation(
            "InvalidScanMax",
            "--scan-max must be at least 1",
        ));
    }
    let (rows, summary) =
        match crossover_threshold_with_inputs(inputs, outputs, support, true_hidden, scan_max) {
            Ok(scan) => (
                scan.rows,
                CrossoverSummary {
                    threshold: Some(scan.threshold),
                    strict_threshold: scan.strict_threshold,
                    flips: scan.flips,
                },
            ),
            Err(NnError::NotFoundWithin(_)) => {
                let rows = scan_comparison(support, inputs, outputs, true_hidden, scan_max)?;
                let flips = rows
                    .windows(2)
                    .filter(|w| w[0].p2_preferred() != w[1].p2_preferred())
                    .count();
                (
                    rows,
                    CrossoverSummary {
                        threshold: None,
                        strict_threshold: None,
                        flips,
                    },
                )
            }
            Err(e) => return Err(e.into()),
        };
    let family = support.name();
    Ok(match format {
        Format::Csv => compare_csv(family, inputs, outputs, true_hidden, &rows, &summary),
        Format::Json => to_pretty_json(&json!({
            "family": family,
            "M": outputs,
            "N": inputs,
            "H_star": true_hidden,
            "scan_max": scan_max,
            "rows": rows.iter().map(|row| {
                let c = &row.comparison;
                json!({
                    "H_minus_Hstar": row.redundant,
                    "lambda_P1": c.p1.to_string(),
                    "lambda_P2": c.p2.to_string(),
                    "lambda_P1_decimal": decimal(&c.p1),
                    "lambda_P2_decimal": decimal(&c.p2),
                    "winner": c.winner.to_string(),
                })
            }).collect::<Vec<_>>(),
            "crossover": {
                "threshold": summary.threshold,
                "strict_threshold": summary.strict_threshold,
                "flips": summary.flips,
            },
        })),
        Format::Text => {
            let mut out = format!("{family} N={inputs} M={outputs} H*={true_hidden}\n");
            let _ = writeln!(out, "{:>6}  {:>14}  {:>14}  winner", "H-H*", "P1", "P2");
            for row in &rows {
                let c = &row.comparison;
                let _ = writeln!(
                    out,
                    "{:>6}  {:>14}  {:>14}  {}",
                    row.redundant,
                    c.p1.to_string(),
                    c.p2.to_string(),
                    c.winner
                );
            }
            match summary.threshold {
                Some(t) => {
                    let _ = writeln!(
                        out,
                        "crossover: P2 <= P1 up to H-H* = {t} (strictly smaller up to {}), {} flip(s)",
                        show_option(summary.strict_threshold),
                        summary.flips
                    );
                }
                None => {
                    let _ = writeln!(out, "crossover: none within H-H* <= {scan_max}");
                }
            }
            out
        }
    })
}

fn compare_csv(
    family: &str,
    inputs: u64,
    outputs: u64,
    true_hidden: u64,
    rows: &[ComparisonRow],
    summary: &CrossoverSummary,
) -> String {
    let mut out = String::from(
        "family,M,N,H_star,H_minus_Hstar,lambda_P1_num,lambda_P1_den,lambda_P2_num,lambda_P2_den,lambda_P1_decimal,lambda_P2_decimal,winner\n",
    );
    for row in rows {
        let c = &row.comparison;
        let _ = writeln!(
            out,
            "{family},{outputs},{inputs},{true_hidden},{},{},{},{},{},{},{},{}",
            row.redundant,
            c.p1.numer(),
            c.p1.denom(),
            c.p2.numer(),
            c.p2.denom(),
            decimal(&c.p1),
            decimal(&c.p2),
            c.winner
        );
    }
    let _ = writeln!(
        out,
        "# crossover,threshold,{},strict_threshold,{},flips,{}",
        show_option(summary.threshold),
        show_option(summary.strict_threshold),
        summary.flips
    );
    out
}

pub const FIGURE_HEADER: &str = "family,point,M,N,H_star,H,lambda_num,lambda_den,lambda_decimal";

pub fn figure(
    true_hidden: u64,
    inputs: u64,
    outputs: &[u64],
    hidden_max: u64,
    format: Format,
) -> Result<String, CliError> {
    if hidden_max <= true_hidden {
        return Err(CliError::validation(
            "EmptyGrid",
            format!("--H-max {hidden_max} leaves no H above H* = {true_hidden}"),
        ));
    }
    let families = [
        ActivationSupport::Exp,
        ActivationSupport::Swish,
        ActivationSupport::Odd,
    ];
    let mut csv = format!("{FIGURE_HEADER}\n");
    let mut json_rows = Vec::new();
    for support in &families {
        for point in [Point::P1, Point::P2] {
            for &m in outputs {
                for h in true_hidden + 1..=hidden_max {
                    let shape = NetworkShape::new(inputs, h, m, true_hidden)?;
                    let lambda = bound_point(&shape, support, point)?.lambda_bound;
                    let family = support.name();
                    let _ = writeln!(
                        csv,
                        "{family},{point},{m},{inputs},{true_hidden},{h},{},{},{}",
                        lambda.numer(),
                        lambda.denom(),
                        decimal(&lambda)
                    );
                    if format == Format::Json {
                        json_rows.push(json!({
                            "family": family,
                            "point": point.to_string(),
                            "M": m,
                            "N": inputs,
                            "H_star": true_hidden,
                            "H": h,
                            "lambda": lambda.to_string(),
                            "lambda_decimal": decimal(&lambda),
                        }));
                    }
                }
            }
        }
    }
    Ok(match format {
        Format::Json => to_pretty_json(&Value::Array(json_rows)),
        Format::Text | Format::Csv => csv,
    })
}

pub fn ledger(spec: &ProblemSpec, format: Format) -> Result<String, CliError> {
    let candidates = chart_candidates(spec)?;
    let (min, count) = minimum_of(&candidates);
    let theorem = compute_bound(spec)?.multiplicity;
    let advisory = if count >= 2 { 2 } else { 1 };
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("stage,depth,value,is_min\n");
            for c in &candidates {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    c.stage,
                    c.depth,
                    c.value,
                    c.value == min
                );
            }
            let _ = writeln!(
                out,
                "# min,{min},minimizers,{count},advisory_multiplicity,{advisory},theorem_multiplicity,{theorem}"
            );
            out
        }
        Format::Json => to_pretty_json(&json!({
            "candidates": candidates.iter().map(|c| json!({
                "stage": c.stage.to_string(),
                "depth": c.depth,
                "value": c.value.to_string(),
                "is_min": c.value == min,
            })).collect::<Vec<_>>(),
            "min": min.to_string(),
            "minimizers": count,
            "advisory_multiplicity": advisory,
            "theorem_multiplicity": theorem,
        })),
        Format::Text => {
            let mut out = format!("{:<8}  {:>8}  {:>12}  min\n", "stage", "depth", "value");
            for c in &candidates {
                let flag = if c.value == min { "*" } else { "" };
                let line = format!(
                    "{:<8}  {:>8}  {:>12}  {flag}",
                    c.stage.to_string(),
                    c.depth.to_string(),
                    c.value.to_string()
                );
                let _ = writeln!(out, "{}", line.trim_end());
            }
            let _ = writeln!(out, "min: {min} ({})", decimal(&min));
            let _ = writeln!(out, "minimizers: {count}");
            let _ = writeln!(out, "advisory multiplicity: {advisory}");
            let _ = writeln!(out, "theorem multiplicity: {theorem}");
            out
        }
    })
}

pub fn verify(cases: usize, seed: u64, max_shelves: usize, format: Format) -> Outcome {
    let report = run_verification(cases, seed, max_shelves);
    let body = match format {
        Format::Text => format!("{report}\n"),
        Format::Json => {
            let show = |list: &[lcbound_core::verify::Counterexample]| {
                list.iter()
                    .map(|c| json!({"case": c.case, "check": c.check, "spec": c.spec, "detail": c.detail}))
                    .collect::<Vec<_>>()
            };
            to_pretty_json(&json!({
                "seed": report.seed,
                "cases": report.cases,
                "checks": report.checks,
                "failures": show(&report.failures),
                "advisory_mismatches": show(&report.advisory_mismatches),
                "result": if report.passed() { "PASS" } else { "FAIL" },
            }))
        }
        Format::Csv => {
            let mut out = String::from("seed,cases,checks,failures,advisory_mismatches,result\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                report.seed,
                report.cases,
                report.checks,
                report.failures.len(),
                report.advisory_mismatches.len(),
                if report.passed() { "PASS" } else { "FAIL" }
            );
            for c in &report.failures {
                let _ = writeln!(
                    out,
                    "# FAIL case {} [{}] {} :: {}",
                    c.case, c.check, c.spec, c.detail
                );
            }
            out
        }
    };
    let failure = (!report.passed()).then(|| CliError {
        kind: ErrorKind::Verification,
        code: "VerificationFailed",
        message: format!(
            "{} of {} checks disagreed",
            report.failures.len(),
            report.checks
        ),
    });
    Outcome { body, failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shelf_pairs() {
        assert_eq!(
            parse_shelves("1:1, 3:2").unwrap(),
            vec![ShelfEntry { m: 1, n: 1 }, ShelfEntry { m: 3, n: 2 }]
        );
        assert!(parse_shelves("").unwrap().is_empty());
        assert_eq!(parse_shelves("1-1").unwrap_err().code, "InvalidShelves");
    }

    #[test]
    fn ledger_marks_minimum() {
        let spec = ProblemSpec::finite(2, 3, 3, &[(1, 1), (3, 1), (5, 1)]);
        let csv = ledger(&spec, Format::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "stage,depth,value,is_min");
        assert_eq!(lines[2], "Step3-1,2,2/1,false");
        assert_eq!(lines[3], "Step3-1,3,11/6,true");
        assert_eq!(lines[6], "Step4,Terminal,5/2,false");
        assert_eq!(
            lines[7],
            "# min,11/6,minimizers,1,advisory_multiplicity,1,theorem_multiplicity,1"
        );
    }

    #[test]
    fn figure_single_cell() {
        let csv = figure(2, 1, &[1], 3, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 7);
        assert!(figure(2, 1, &[1], 2, Format::Csv).is_err());
    }

    #[test]
    fn compare_winner_labels() {
        let csv = compare(&ActivationSupport::Odd, 1, 1, 2, 20, Format::Csv).unwrap();
        let winners: Vec<&str> = csv
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.rsplit(',').next().unwrap())
            .collect();
        assert_eq!(winners.len(), 20);
        assert!(winners[..8].iter().all(|w| *w == "P2"));
        assert_eq!(winners[8], "Equal");
        assert!(winners[9..].iter().all(|w| *w == "P1"));
        assert!(csv.ends_with("# crossover,threshold,9,strict_threshold,8,flips,1\n"));
    }
}
