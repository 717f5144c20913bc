use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use voa_modular::genus2::{chequered_oracle, default_cutoff, det_inv_sqrt, det_series, period_matrix, z2_heisenberg};
use voa_modular::heisenberg::{qv_involution_sum, Partition};
use voa_modular::lattice::{lattice_voa_partition, shell_counts, EvenLattice};
use voa_modular::mlde::{
    deligne_charges, dim_v2, dim_v3, d_of_c, indicial_roots, solve_mlde2, verify_k2_table, verify_k3_table, TableRow,
};
use voa_modular::par::with_threads;
use voa_modular::quasimodular::{eisenstein, render_e, render_pqr, to_qseries, to_terms};
use voa_modular::rational::parse_rational;
use voa_modular::verify::run_all;
use voa_modular::virasoro::kac_det;
use voa_modular::{EpsSeries, QSeries, Rational};

#[derive(Parser)]
#[command(name = "voa-modular", version, about = "Exact VOA characters, correlators and quasimodular forms")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Worker threads (0 = all cores).
    #[arg(long, env = "VOA_MODULAR_JOBS", default_value_t = 0, global = true)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Det,
    Omega,
    Z2,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    K2,
    K3,
}

#[derive(Subcommand)]
enum Command {
    /// Eisenstein series E_k in P, Q, R and as a q-expansion.
    Eisenstein {
        /// Weight.
        k: i64,
        #[arg(short = 'N', long, default_value_t = 20)]
        order: usize,
    },
    /// Heisenberg 1-point function Q_v for a Fock state v.
    Qv {
        /// "1,1,1,2,2,5" or "1^3 2^2 5".
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
        /// Also print Z(v) = Q_v / eta to this q-order.
        #[arg(short = 'N', long)]
        order: Option<usize>,
    },
    /// Kac determinant det M_n as a polynomial in c.
    Kacdet {
        #[arg(short = 'N', long = "n", visible_alias = "order")]
        n: u32,
    },
    /// Genus two Heisenberg data from sewing two tori.
    Genus2 {
        /// Order in the sewing parameter eps.
        #[arg(short = 'N', long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, value_enum, default_value = "z2")]
        what: What,
    },
    /// Second order modular linear differential equation.
    #[command(group(ArgGroup::new("mode").required(true).args(["c", "table", "deligne"])))]
    Mlde {
        /// Central charge "p/q".
        #[arg(long, value_parser = parse_c, allow_hyphen_values = true)]
        c: Option<Rational>,
        #[arg(short = 'N', long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum)]
        table: Option<Table>,
        #[arg(long)]
        deligne: bool,
    },
    /// Theta series of an even lattice from a JSON Gram matrix.
    Theta {
        #[arg(long)]
        gram: PathBuf,
        #[arg(short = 'N', long, default_value_t = 20)]
        order: usize,
    },
    /// Run every acceptance check and print PASS/FAIL per item.
    Verify {
        /// Skip the floating point transformation checks.
        #[arg(long)]
        skip_numeric: bool,
    },
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: voa_modular::Error| e.to_string())
}

fn parse_c(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// What a command produces: a table, free text, or both, plus a JSON mirror.
struct Output {
    lines: Vec<String>,
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
    ok: bool,
}

impl Output {
    fn text(lines: Vec<String>, json: Value) -> Self {
        Self { lines, headers: vec![], rows: vec![], json, ok: true }
    }

    fn table(headers: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value) -> Self {
        Self { lines: vec![], headers, rows, json, ok: true }
    }

    fn with_lines(mut self, lines: Vec<String>) -> Self {
        self.lines = lines;
        self
    }

    fn print(&self, format: Format) -> anyhow::Result<()> {
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&self.json)?),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(std::io::stdout());
                if self.headers.is_empty() {
                    w.write_record(["value"])?;
                    for l in &self.lines {
                        w.write_record([l])?;
                    }
                } else {
                    w.write_record(&self.headers)?;
                    for r in &self.rows {
                        w.write_record(r)?;
                    }
                }
                w.flush()?;
            }
            Format::Text => {
                for l in &self.lines {
                    println!("{l}");
                }
                if !self.headers.is_empty() {
                    print!("{}", render_table(&self.headers, &self.rows));
                }
            }
        }
        Ok(())
    }
}

/// Columns separated by " | ", right-aligned except the last.
fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let last = cells.len() - 1;
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i == last { c.to_string() } else { format!("{c:>w$}") })
            .collect();
        padded.join(" | ")
    };
    let mut out = line(headers.to_vec()) + "\n";
    out += &widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-+-");
    out += "\n";
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
        out += "\n";
    }
    out
}

fn series_rows(s: &QSeries) -> Vec<Vec<String>> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| vec![(s.offset() + Rational::from_integer(n.into())).to_string(), c.to_string()])
        .collect()
}

fn eps_rows(s: &EpsSeries) -> Vec<Vec<String>> {
    s.table().into_iter().map(|(n, t, c)| vec![n.to_string(), t, c.to_string()]).collect()
}

fn table_rows(rows: &[TableRow]) -> Vec<Vec<String>> {
    rows.iter().map(|r| vec![r.c.to_string(), r.computed.to_string()]).collect()
}

fn run(cmd: Command) -> anyhow::Result<Output> {
    Ok(match cmd {
        Command::Eisenstein { k, order } => {
            let f = eisenstein(k)?;
            let s = to_qseries(&f, order);
            Output::table(vec!["q^n", "coeff"], series_rows(&s), json!({
                "k": k, "form": to_terms(&f), "qseries": s,
            }))
            .with_lines(vec![format!("E{k} = {}", render_pqr(&f)), format!("E{k} = {s}")])
        }
        Command::Qv { partition, order } => {
            let f = qv_involution_sum(&partition);
            let mut lines = vec![render_e(&f), format!("P,Q,R: {}", render_pqr(&f))];
            let mut js = json!({
                "partition": partition.to_string(), "e_form": render_e(&f), "pqr": render_pqr(&f), "form": to_terms(&f),
            });
            if let Some(n) = order {
                let z = voa_modular::heisenberg::z1_heisenberg(&partition, n);
                lines.push(format!("Z(v) = {z}"));
                js["z"] = serde_json::to_value(&z)?;
            }
            Output::text(lines, js)
        }
        Command::Kacdet { n } => {
            let d = kac_det(n);
            let factored = d.factor().to_string();
            let coeffs: Vec<String> = d.coeffs().iter().map(ToString::to_string).collect();
            Output::text(vec![factored.clone()], json!({ "n": n, "det": factored, "coeffs": coeffs }))
        }
        Command::Genus2 { order, rank, what } => genus2(order, rank, what)?,
        Command::Mlde { c, order, table, deligne } => match (c, table, deligne) {
            (Some(c), _, _) => mlde(&c, order)?,
            (_, Some(t), _) => {
                let rows = match t {
                    Table::K2 => verify_k2_table()?,
                    Table::K3 => verify_k3_table()?,
                };
                let ok = rows.iter().all(|r| r.matches);
                let head = if matches!(t, Table::K2) { vec!["c", "dim V2 primaries"] } else { vec!["c", "dim V3 primaries"] };
                let mut out = Output::table(head, table_rows(&rows), serde_json::to_value(&rows)?);
                out.ok = ok;
                out
            }
            _ => deligne_table()?,
        },
        Command::Theta { gram, order } => {
            let text = std::fs::read_to_string(&gram).with_context(|| format!("reading {}", gram.display()))?;
            let l = EvenLattice::from_json(&text)?;
            let counts = shell_counts(&l, order)?;
            let z = lattice_voa_partition(&l, order)?;
            let rows = counts.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.to_string()]).collect();
            Output::table(vec!["n", "|L_n|"], rows, json!({
                "rank": l.rank(), "counts": counts, "theta": voa_modular::lattice::theta_series(&l, order)?, "partition_function": z,
            }))
        }
        Command::Verify { skip_numeric } => {
            let results = run_all(!skip_numeric);
            let ok = results.iter().all(|r| r.passed);
            let rows = results
                .iter()
                .map(|r| vec![r.id.to_string(), (if r.passed { "PASS" } else { "FAIL" }).into(), r.title.into(), r.detail.clone()])
                .collect();
            let lines = results
                .iter()
                .map(|r| format!("{:>2} {} {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.detail))
                .collect();
            let mut out = Output::table(vec!["id", "status", "check", "detail"], rows, serde_json::to_value(&results)?);
            out.headers.clear();
            out.lines = lines;
            out.ok = ok;
            if ok {
                out.lines.push(format!("all {} checks passed", results.len()));
            }
            out
        }
    })
}

fn genus2(order: usize, rank: u32, what: What) -> anyhow::Result<Output> {
    let k = default_cutoff(order);
    let head = vec!["eps^n", "term", "coeff"];
    Ok(match what {
        What::Det => {
            let d = det_series(k, order)?;
            Output::table(head, eps_rows(&d), json!({ "det": d.to_json_terms() }))
                .with_lines(vec!["det(I - A1 A2):".into()])
        }
        What::Z2 => {
            let z = z2_heisenberg(rank, k, order)?;
            let pre = z.prefactor();
            Output::table(head, eps_rows(&z.series), json!({
                "rank": rank, "prefactor": pre, "series": z.series.to_json_terms(),
            }))
            .with_lines(vec![format!("Z2 = {pre} × series:")])
        }
        What::Omega => {
            let pm = period_matrix(k, order)?;
            let mut rows = Vec::new();
            for (name, s) in [("Omega11", &pm.omega11), ("Omega22", &pm.omega22), ("Omega12", &pm.omega12)] {
                for mut r in eps_rows(s) {
                    r.insert(0, name.into());
                    rows.push(r);
                }
            }
            Output::table(vec!["entry", "eps^n", "term", "coeff"], rows, json!({
                "omega11": pm.omega11.to_json_terms(),
                "omega22": pm.omega22.to_json_terms(),
                "omega12": pm.omega12.to_json_terms(),
            }))
            .with_lines(vec!["2*pi*i*(Omega - diag(t1, t2)):".into()])
        }
        What::Oracle => {
            let closed = det_inv_sqrt(k, order)?;
            let mut rows = Vec::new();
            let mut ok = true;
            for n in 0..=order {
                let c = chequered_oracle(n as u32);
                let same = c == closed.coeff(n);
                ok &= same;
                for mut r in eps_rows(&EpsSeries::monomial(n, c, order)) {
                    r.push((if same { "yes" } else { "no" }).into());
                    rows.push(r);
                }
            }
            let mut out = Output::table(vec!["eps^n", "term", "coeff", "= det^-1/2"], rows, json!({
                "oracle_matches": ok, "series": closed.to_json_terms(),
            }));
            out.ok = ok;
            out
        }
    })
}

fn mlde(c: &Rational, order: usize) -> anyhow::Result<Output> {
    let sol = solve_mlde2(c, order)?;
    let (r1, r2) = indicial_roots(c);
    let mut lines = vec![
        format!("c = {c}"),
        format!("indicial roots: {r1}, {r2}"),
    ];
    let named = [("d(c)", d_of_c(c)), ("dim V2", dim_v2(c)), ("dim V3", dim_v3(c))];
    let mut extra = serde_json::Map::new();
    for (name, v) in named {
        if let Ok(v) = v {
            lines.push(format!("{name} = {v}"));
            extra.insert(name.into(), Value::String(v.to_string()));
        }
    }
    let rows = sol.coeffs.coeffs().iter().enumerate().map(|(n, a)| vec![n.to_string(), a.to_string()]).collect();
    let mut js = serde_json::to_value(&sol)?;
    js["closed_forms"] = Value::Object(extra);
    Ok(Output::table(vec!["n", "a_n"], rows, js).with_lines(lines))
}

fn deligne_table() -> anyhow::Result<Output> {
    let mut rows = Vec::new();
    let mut js = Vec::new();
    let mut ok = true;
    for (c, dim, name) in deligne_charges() {
        let sol = solve_mlde2(&c, 3)?;
        let a = sol.coeffs.coeffs();
        ok &= a[1] == Rational::from_integer(dim.into());
        rows.push(vec![name.to_string(), c.to_string(), dim.to_string(), a[1].to_string(), a[2].to_string(), a[3].to_string()]);
        js.push(json!({
            "algebra": name, "c": c.to_string(), "dim": dim,
            "a1": a[1].to_string(), "a2": a[2].to_string(), "a3": a[3].to_string(),
        }));
    }
    if !ok {
        bail!("a_1 differs from the Lie algebra dimension");
    }
    Ok(Output::table(vec!["algebra", "c", "dim g", "a1", "a2", "a3"], rows, Value::Array(js)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.format;
    match with_threads(cli.jobs, || run(cli.command)) {
        Ok(out) => match out.print(format) {
            Ok(()) if out.ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
