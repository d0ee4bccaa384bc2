use std::fs;
use std::path::Path;

use hypersphere_lab::constructions::{
    compare_report, coset_config, formula_tables, integer_oracle, oracle_scan, trivial_config,
    CosetSpec,
};
use hypersphere_lab::counting::{
    ordinary_hyperplane_spectrum, spectrum, spectrum_hashed, CountOptions,
};
use hypersphere_lab::geometry::{
    general_position_check, invert_set, lift_set, GeneralPosition, Point, PointSet,
};
use hypersphere_lab::numeric::{parse_rational, Backend, Scalar, ScalarDecoder};
use hypersphere_lab::{selftest, Error, Result};
use serde_json::{json, Map, Value};

use crate::args::{
    Cli, Command, CompareArgs, CountArgs, GenerateArgs, InvertArgs, Kind, Method, OracleArgs,
    ReportFormat, SpectrumFormat,
};

/// Everything that determines an output, echoed into it. Thread count is
/// deliberately absent: it never changes results.
fn header(cli: &Cli, command: &str, fields: Value) -> Value {
    let mut h = Map::new();
    h.insert("tool".into(), json!("hypersphere-lab"));
    h.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    h.insert("command".into(), json!(command));
    h.insert("bits".into(), json!(cli.bits));
    if let Value::Object(f) = fields {
        h.extend(f);
    }
    Value::Object(h)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(cli: &Cli, v: &Value) -> Result<()> {
    emit(cli, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn comment_lines(h: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = h {
        for (k, v) in m {
            out.push_str(&format!("# {k}={v}\n"));
        }
    }
    out
}

fn read_set(path: &Path, bits: u32) -> Result<PointSet> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)?;
    PointSet::from_json_with(&v, &mut ScalarDecoder::with_max_bits(bits))
}

fn with_run(mut set: PointSet, run: Value) -> PointSet {
    set.metadata_mut().extra.insert("run".into(), run);
    set
}

fn opts(cli: &Cli) -> CountOptions {
    CountOptions {
        threads: cli.threads,
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Validate(a) => validate(cli, &a.input),
        Command::Count(a) => count(cli, a),
        Command::Lift(a) => {
            let p = read_set(&a.input, cli.bits)?;
            let run = header(
                cli,
                "lift",
                json!({ "input": a.input.display().to_string() }),
            );
            emit(cli, &with_run(lift_set(&p)?, run).to_json_string())?;
            Ok(0)
        }
        Command::Invert(a) => invert(cli, a),
        Command::Oracle(a) => oracle(cli, a),
        Command::Formula(a) => {
            let f = formula_tables(a.d, a.n)?;
            let mut v = json!({ "run": header(cli, "formula", json!({ "d": a.d, "n": a.n })) });
            let fv = f.to_json();
            v["ordinary"] = fv["ordinary"].clone();
            v["dplus2"] = fv["dplus2"].clone();
            emit_json(cli, &v)?;
            Ok(0)
        }
        Command::Compare(a) => compare(cli, a),
        Command::Selftest(a) => {
            let results = selftest::run(a.seed);
            let mut text = String::new();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{tag} {}: {}\n", r.name, r.detail));
            }
            emit(cli, &text)?;
            Ok(if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            })
        }
    }
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Result<u8> {
    let (set, kind, default_backend) = match a.kind {
        Kind::Trivial => (
            trivial_config(a.d, a.n, a.seed)?,
            "trivial",
            Backend::Rational,
        ),
        Kind::Coset => (
            coset_config(&CosetSpec::new(a.d, a.n, a.l)?)?,
            "coset",
            Backend::Cyclotomic,
        ),
    };
    let backend = a.backend.map(Backend::from).unwrap_or(default_backend);
    let mut set = set.convert(backend, cli.bits)?;
    if a.kind == Kind::Trivial {
        // the seed is part of the trivial provenance only
        set.metadata_mut().seed = Some(a.seed);
    }
    let run = header(
        cli,
        "generate",
        json!({
            "kind": kind,
            "d": a.d,
            "n": a.n,
            "l": a.l,
            "seed": a.seed,
            "backend": backend.name(),
        }),
    );
    emit(cli, &with_run(set, run).to_json_string())?;
    Ok(0)
}

fn validate(cli: &Cli, input: &Path) -> Result<u8> {
    let p = read_set(input, cli.bits)?;
    let run = header(
        cli,
        "validate",
        json!({ "input": input.display().to_string() }),
    );
    let backend = p.backend().unwrap_or(Backend::Rational);
    let (status, witness, code) = if backend == Backend::Interval {
        (json!("not checked: interval coordinates"), Value::Null, 0)
    } else {
        match general_position_check(&p, cli.threads)? {
            GeneralPosition::Ok => (json!("ok"), Value::Null, 0),
            GeneralPosition::Violation(w) => (json!("violation"), json!(w), 4),
        }
    };
    emit_json(
        cli,
        &json!({
            "run": run,
            "dimension": p.dimension(),
            "n": p.len(),
            "backend": backend.name(),
            "general_position": status,
            "witness": witness,
        }),
    )?;
    Ok(code)
}

fn count(cli: &Cli, a: &CountArgs) -> Result<u8> {
    let mut p = read_set(&a.input, cli.bits)?;
    if let Some(b) = a.backend {
        p = p.convert(b.into(), cli.bits)?;
    }
    let method = match a.method {
        Method::Incidence => "incidence",
        Method::Hashing => "hashing",
    };
    let s = match (a.hyperplanes, a.method) {
        (true, Method::Incidence) => ordinary_hyperplane_spectrum(&p, &opts(cli))?,
        (false, Method::Incidence) => spectrum(&p, &opts(cli))?,
        (false, Method::Hashing) => spectrum_hashed(&p, &opts(cli))?,
        (true, Method::Hashing) => {
            return Err(Error::Unsupported(
                "hashing counts hyperspheres only".into(),
            ))
        }
    };
    let run = header(
        cli,
        "count",
        json!({
            "input": a.input.display().to_string(),
            "backend": p.backend().unwrap_or(Backend::Rational).name(),
            "method": method,
            "hyperplanes": a.hyperplanes,
            "generator": p.metadata().generator,
            "d": p.metadata().d,
            "n": p.metadata().n,
            "l": p.metadata().l,
            "seed": p.metadata().seed,
        }),
    );
    match a.format {
        SpectrumFormat::Json => emit_json(cli, &json!({ "run": run, "spectrum": s.to_json() }))?,
        SpectrumFormat::Csv => emit(cli, &(comment_lines(&run) + &s.to_csv()))?,
    }
    Ok(if s.certified() { 0 } else { 3 })
}

fn parse_center(text: &str, like: &Point) -> Result<Point> {
    let coords = text
        .split(',')
        .enumerate()
        .map(|(i, c)| {
            parse_rational(c)
                .map(|q| like.coords()[0].constant_like(&q))
                .ok_or_else(|| Error::Parse {
                    field: format!("center[{i}]"),
                    msg: format!("not a rational number: {c:?}"),
                })
        })
        .collect::<Result<Vec<Scalar>>>()?;
    if coords.len() != like.dim() {
        return Err(Error::Parse {
            field: "center".into(),
            msg: format!("expected {} coordinates, got {}", like.dim(), coords.len()),
        });
    }
    Point::new(coords)
}

fn invert(cli: &Cli, a: &InvertArgs) -> Result<u8> {
    let p = read_set(&a.input, cli.bits)?;
    let first = p
        .points()
        .first()
        .ok_or_else(|| Error::Domain("empty point set".into()))?;
    let c = parse_center(&a.center, first)?;
    let run = header(
        cli,
        "invert",
        json!({ "input": a.input.display().to_string(), "center": a.center }),
    );
    emit(cli, &with_run(invert_set(&p, &c)?, run).to_json_string())?;
    Ok(0)
}

fn oracle(cli: &Cli, a: &OracleArgs) -> Result<u8> {
    let run = header(
        cli,
        "oracle",
        json!({ "d": a.d, "n": a.n, "l": a.l, "scan": a.scan }),
    );
    let o = integer_oracle(a.n, a.d, a.l, cli.threads)?;
    let mut v = json!({ "run": run, "ordinary": o.ordinary, "dplus2": o.dplus2 });
    if a.scan {
        let s = oracle_scan(a.n, a.d, cli.threads)?;
        v["best"] = json!({ "l": s.best.l, "ordinary": s.best.ordinary, "dplus2": s.best.dplus2 });
        v["offsets"] = s
            .per_offset
            .iter()
            .map(|c| json!({ "l": c.l, "ordinary": c.ordinary, "dplus2": c.dplus2 }))
            .collect();
    }
    emit_json(cli, &v)?;
    Ok(0)
}

fn compare(cli: &Cli, a: &CompareArgs) -> Result<u8> {
    let p = read_set(&a.input, cli.bits)?;
    let r = compare_report(&p, &opts(cli))?;
    let run = header(
        cli,
        "compare",
        json!({ "input": a.input.display().to_string(), "seed": p.metadata().seed }),
    );
    match a.format {
        ReportFormat::Markdown => {
            let mut text = String::from("<!--\n");
            text.push_str(&serde_json::to_string_pretty(&run)?);
            text.push_str("\n-->\n");
            text.push_str(&r.to_markdown());
            emit(cli, &text)?;
        }
        ReportFormat::Csv => emit(cli, &(comment_lines(&run) + &r.to_csv()))?,
        ReportFormat::Json => {
            let mut v = serde_json::to_value(&r)?;
            v["run"] = run;
            v["spectrum"] = r.spectrum.to_json();
            emit_json(cli, &v)?;
        }
    }
    Ok(if !r.consistent() {
        5
    } else if !r.spectrum.certified() {
        3
    } else {
        0
    })
}
