//! Command-line front end: verification suites, Bethe solving, coupling
//! scans, oracle comparison, and pointwise wavefunction checks, with
//! machine-readable output.
//!
//! Exit codes: 0 on success, 1 when a verification or solve fails, 2 on
//! usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use g2_bethe::bethe::{
    enumerate_levels, solve_sector, BetheSolution, SectorLabel, SolveError, SolverOptions,
};
use g2_bethe::operators::{CoeffVector, Coupling};
use g2_bethe::oracle;
use g2_bethe::verify::{run_suite, Corruption, SuiteConfig};
use g2_bethe::wavefunction::{check_boundary, check_circle_matching, verify_energy, WaveData};
use g2_bethe::weyl;

#[derive(Parser)]
#[command(
    name = "g2-bethe",
    version,
    about = "Scattering-operator verification and Bethe-equation solving \
             for the three-particle pair/midpoint contact model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Comma-separated table with a header row.
    Table,
    /// One JSON document per line, schema-tagged.
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CorruptKind {
    /// Corrupt the six-factor consistency relation (negative control).
    Gybe,
}

fn parse_sector(s: &str) -> Result<SectorLabel, String> {
    s.parse()
}

fn parse_qn(s: &str) -> Result<(i32, i32, i32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected m1,m2,nP".into());
    }
    let parse = |p: &str| p.trim().parse::<i32>().map_err(|e| e.to_string());
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}

fn parse_k(s: &str) -> Result<KArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected k1,k2,k3".into());
    }
    let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok(KArg([parse(parts[0])?, parse(parts[1])?, parse(parts[2])?]))
}

#[derive(Clone, Copy, Debug)]
struct KArg([f64; 3]);

#[derive(Subcommand)]
enum Command {
    /// Run the exact-arithmetic identity suite at random rational points.
    Verify {
        /// Number of rational sample points.
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Seed for the deterministic sample stream.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Deliberately corrupt one check (negative control).
        #[arg(long, value_enum)]
        corrupt: Option<CorruptKind>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the Bethe equations for quantum-number tuples.
    Solve {
        /// Half-circumference of the circle.
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Short-root (pair collision) coupling.
        #[arg(long, default_value_t = 0.0)]
        gs: f64,
        /// Long-root (midpoint collision) coupling.
        #[arg(long, default_value_t = 0.0)]
        gl: f64,
        /// One-dimensional sector label: ++, +-, -+, -- or trivial.
        #[arg(long, default_value = "trivial", value_parser = parse_sector)]
        sector: SectorLabel,
        /// Quantum numbers m1,m2,nP; repeatable.
        #[arg(long = "qn", value_parser = parse_qn, required = true)]
        qn: Vec<(i32, i32, i32)>,
        /// Residual bound on returned solutions.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Records)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the couplings from zero to the target and tabulate the root
    /// path of one quantum-number tuple.
    Scan {
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Target short-root coupling.
        #[arg(long, default_value_t = 0.5)]
        gs: f64,
        /// Target long-root coupling.
        #[arg(long, default_value_t = 0.5)]
        gl: f64,
        /// Number of sweep steps (the table has steps + 1 rows).
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value = "trivial", value_parser = parse_sector)]
        sector: SectorLabel,
        #[arg(long = "qn", value_parser = parse_qn, default_value = "0,0,0")]
        qn: (i32, i32, i32),
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Bethe energies against the plane-wave diagonalization
    /// oracle in one total-momentum block.
    Oracle {
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        #[arg(long, default_value_t = 0.1)]
        gs: f64,
        #[arg(long, default_value_t = 0.1)]
        gl: f64,
        /// Plane-wave cutoff; the convergence column reruns at nmax + 4.
        #[arg(long, default_value_t = 12)]
        nmax: i32,
        /// Total momentum index N (the block carries P = πN/L).
        #[arg(long = "N", default_value_t = 0)]
        total: i32,
        /// Number of lowest Bethe levels to match.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Branch-integer window for the sector enumeration.
        #[arg(long, default_value_t = 2)]
        mmax: i32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check boundary conditions and the energy identity pointwise; with
    /// --sector and --qn also the circle matching of a solved state.
    Wavecheck {
        /// Momentum k1,k2,k3 (a seeded random one when omitted).
        #[arg(long, value_parser = parse_k)]
        k: Option<KArg>,
        #[arg(long, default_value_t = 0.3)]
        gs: f64,
        #[arg(long, default_value_t = 0.2)]
        gl: f64,
        /// Points per hyperplane.
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        /// Residual bound for the line-case checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Solve this sector/tuple and check the circle matching too.
        #[arg(long, value_parser = parse_sector)]
        sector: Option<SectorLabel>,
        #[arg(long = "qn", value_parser = parse_qn)]
        qn: Option<(i32, i32, i32)>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// 17-significant-digit float for the delimited tables.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_out(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

#[derive(serde::Serialize)]
struct SolutionRecord<'a> {
    schema: &'static str,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    sector: String,
    quantum_numbers: (i32, i32, i32),
    l: f64,
    gs: f64,
    gl: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eq_residuals: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    momentum_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_i: Option<&'a [Complex64; 12]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    continuation_steps: Option<usize>,
}

impl<'a> SolutionRecord<'a> {
    fn converged(sol: &'a BetheSolution) -> Self {
        SolutionRecord {
            schema: "g2-bethe.solution/1",
            converged: true,
            error: None,
            sector: sol.sector.name(),
            quantum_numbers: sol.quantum_numbers,
            l: sol.l,
            gs: sol.couplings.gs,
            gl: sol.couplings.gl,
            k: Some(sol.k),
            energy: Some(sol.energy),
            residual: Some(sol.residual),
            eq_residuals: Some(sol.eq_residuals),
            momentum_residual: Some(sol.momentum_residual),
            a_i: Some(&sol.a_i),
            iterations: Some(sol.iterations),
            continuation_steps: Some(sol.continuation_steps),
        }
    }

    fn failed(
        err: &SolveError,
        sector: SectorLabel,
        qn: (i32, i32, i32),
        l: f64,
        c: &Coupling<f64>,
    ) -> Self {
        SolutionRecord {
            schema: "g2-bethe.solution/1",
            converged: false,
            error: Some(err.to_string()),
            sector: sector.name(),
            quantum_numbers: qn,
            l,
            gs: c.gs,
            gl: c.gl,
            k: None,
            energy: None,
            residual: None,
            eq_residuals: None,
            momentum_residual: None,
            a_i: None,
            iterations: None,
            continuation_steps: None,
        }
    }
}

fn cmd_verify(
    samples: usize,
    seed: u64,
    corrupt: Option<CorruptKind>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let cfg = SuiteConfig {
        samples,
        seed,
        corrupt: corrupt.map(|CorruptKind::Gybe| Corruption::Gybe),
    };
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let mut text = String::new();
    match format {
        Format::Table => {
            text.push_str("check,samples,failures,pass\n");
            for c in &report.checks {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name, c.samples, c.failures, c.pass
                ));
            }
        }
        Format::Records => {
            for c in &report.checks {
                let mut value = serde_json::to_value(c).unwrap();
                value["schema"] = "g2-bethe.verify/1".into();
                value["seed"] = report.seed.into();
                text.push_str(&serde_json::to_string(&value).unwrap());
                text.push('\n');
            }
            text.push_str(&format!(
                "{{\"schema\":\"g2-bethe.verify-summary/1\",\"seed\":{},\"all_pass\":{}}}\n",
                report.seed, report.all_pass
            ));
        }
    }
    write_out(out, &text).map_err(|e| e.to_string())?;
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve(
    l: f64,
    c: Coupling<f64>,
    sector: SectorLabel,
    tuples: &[(i32, i32, i32)],
    tol: f64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    type Solved = (Result<BetheSolution, SolveError>, (i32, i32, i32));
    let results: Vec<Solved> = tuples
        .iter()
        .map(|&qn| (solve_sector(&sector, qn, l, &c, &opts), qn))
        .collect();

    let mut text = String::new();
    match format {
        Format::Records => {
            for (res, qn) in &results {
                let record = match res {
                    Ok(sol) => SolutionRecord::converged(sol),
                    Err(err) => SolutionRecord::failed(err, sector, *qn, l, &c),
                };
                text.push_str(&serde_json::to_string(&record).unwrap());
                text.push('\n');
            }
        }
        Format::Table => {
            text.push_str(
                "sector,m1,m2,nP,converged,k1,k2,k3,energy,residual,eq1,eq2,eq3,momentum_residual\n",
            );
            for (res, qn) in &results {
                match res {
                    Ok(sol) => text.push_str(&format!(
                        "{},{},{},{},true,{},{},{},{},{},{},{},{},{}\n",
                        sol.sector.name(),
                        qn.0,
                        qn.1,
                        qn.2,
                        fmt17(sol.k[0]),
                        fmt17(sol.k[1]),
                        fmt17(sol.k[2]),
                        fmt17(sol.energy),
                        fmt17(sol.residual),
                        fmt17(sol.eq_residuals[0]),
                        fmt17(sol.eq_residuals[1]),
                        fmt17(sol.eq_residuals[2]),
                        fmt17(sol.momentum_residual),
                    )),
                    Err(_) => text.push_str(&format!(
                        "{},{},{},{},false,,,,,,,,,\n",
                        sector.name(),
                        qn.0,
                        qn.1,
                        qn.2
                    )),
                }
            }
        }
    }
    write_out(out, &text).map_err(|e| e.to_string())?;
    Ok(if results.iter().all(|(r, _)| r.is_ok()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_scan(
    l: f64,
    target: Coupling<f64>,
    steps: usize,
    sector: SectorLabel,
    qn: (i32, i32, i32),
    tol: f64,
    out: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    let mut text = String::from("gs,gl,k1,k2,k3,energy,converged\n");
    let mut all_ok = true;
    for j in 0..=steps {
        let t = if steps == 0 { 1.0 } else { j as f64 / steps as f64 };
        let c = target.scaled(t);
        match solve_sector(&sector, qn, l, &c, &opts) {
            Ok(sol) => text.push_str(&format!(
                "{},{},{},{},{},{},true\n",
                fmt17(c.gs),
                fmt17(c.gl),
                fmt17(sol.k[0]),
                fmt17(sol.k[1]),
                fmt17(sol.k[2]),
                fmt17(sol.energy),
            )),
            Err(_) => {
                all_ok = false;
                text.push_str(&format!("{},{},,,,,false\n", fmt17(c.gs), fmt17(c.gl)));
            }
        }
    }
    write_out(out, &text).map_err(|e| e.to_string())?;
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    l: f64,
    c: Coupling<f64>,
    nmax: i32,
    total: i32,
    levels: usize,
    mmax: i32,
    tol: f64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    let solutions = enumerate_levels(l, &c, total, mmax, &opts);
    let lowest: Vec<BetheSolution> = solutions.into_iter().take(levels).collect();
    if lowest.is_empty() {
        return Err("no Bethe levels converged in the requested window".into());
    }
    let block = oracle::build_block(total, nmax, l, &c);
    let report = oracle::compare(&lowest, &block, levels.max(10) * 4);
    let block_next = oracle::build_block(total, nmax + 4, l, &c);
    let report_next = oracle::compare(&lowest, &block_next, levels.max(10) * 4);

    let mut text = String::new();
    match format {
        Format::Table => {
            text.push_str(
                "level,sector,m1,m2,nP,bethe_energy,oracle_energy,relative_deviation,\
                 relative_deviation_next\n",
            );
            for (i, (m, m_next)) in report
                .matches
                .iter()
                .zip(report_next.matches.iter())
                .enumerate()
            {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    i,
                    m.sector.name(),
                    m.quantum_numbers.0,
                    m.quantum_numbers.1,
                    m.quantum_numbers.2,
                    fmt17(m.bethe_energy),
                    fmt17(m.oracle_energy),
                    fmt17(m.relative_deviation),
                    fmt17(m_next.relative_deviation),
                ));
            }
            for e in &report.unmatched_oracle {
                text.push_str(&format!("unmatched,,,,,,{},,\n", fmt17(*e)));
            }
        }
        Format::Records => {
            for (m, m_next) in report.matches.iter().zip(report_next.matches.iter()) {
                let mut value = serde_json::to_value(m).unwrap();
                value["schema"] = "g2-bethe.oracle-match/1".into();
                value["n_max"] = nmax.into();
                value["relative_deviation_next"] = m_next.relative_deviation.into();
                text.push_str(&serde_json::to_string(&value).unwrap());
                text.push('\n');
            }
            text.push_str(&format!(
                "{{\"schema\":\"g2-bethe.oracle-summary/1\",\"total_index\":{},\"n_max\":{},\
                 \"unmatched_oracle\":{}}}\n",
                total,
                nmax,
                serde_json::to_string(&report.unmatched_oracle).unwrap()
            ));
        }
    }
    write_out(out, &text).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_wavecheck(
    k: Option<[f64; 3]>,
    c: Coupling<f64>,
    points: usize,
    seed: u64,
    tol: f64,
    l: f64,
    sector: Option<SectorLabel>,
    qn: Option<(i32, i32, i32)>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let k = k.unwrap_or_else(|| std::array::from_fn(|_| rng.random_range(-1.5..1.5)));
    let a_i = CoeffVector::from_fn(|_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let data = WaveData::from_initial(k, &a_i, c).map_err(|e| e.to_string())?;

    let mut rows: Vec<(String, f64, f64, bool)> = Vec::new();
    let mut all_ok = true;
    for (i, alpha) in weyl::roots().iter().enumerate() {
        let report = check_boundary(&data, alpha, points, seed.wrapping_add(i as u64))
            .map_err(|e| e.to_string())?;
        let ok = report.continuity_max < tol && report.jump_max < tol;
        all_ok &= ok;
        rows.push((
            format!("{:?}", alpha.components()),
            report.continuity_max,
            report.jump_max,
            ok,
        ));
    }
    let energy_report = verify_energy(&data, points, seed.wrapping_add(101));
    let energy_ok = energy_report.max_relative_residual < tol.max(1e-10);
    all_ok &= energy_ok;

    let circle = match (sector, qn) {
        (Some(sector), Some(qn)) => {
            let opts = SolverOptions::default();
            let sol = solve_sector(&sector, qn, l, &c, &opts).map_err(|e| e.to_string())?;
            let report = check_circle_matching(&sol, points.max(10), seed.wrapping_add(202))
                .map_err(|e| e.to_string())?;
            let ok = report.value_max < 1e-8 && report.jump_max < 1e-8;
            all_ok &= ok;
            Some((sol, report, ok))
        }
        _ => None,
    };

    let mut text = String::new();
    match format {
        Format::Table => {
            text.push_str("check,continuity_max,jump_max,pass\n");
            for (name, cont, jump, ok) in &rows {
                text.push_str(&format!(
                    "\"{}\",{},{},{}\n",
                    name,
                    fmt17(*cont),
                    fmt17(*jump),
                    ok
                ));
            }
            text.push_str(&format!(
                "energy_identity,{},,{}\n",
                fmt17(energy_report.max_relative_residual),
                energy_ok
            ));
            if let Some((sol, report, ok)) = &circle {
                text.push_str(&format!(
                    "circle_matching_E={},{},{},{}\n",
                    fmt17(sol.energy),
                    fmt17(report.value_max),
                    fmt17(report.jump_max),
                    ok
                ));
            }
        }
        Format::Records => {
            for (name, cont, jump, ok) in &rows {
                text.push_str(&format!(
                    "{{\"schema\":\"g2-bethe.wavecheck/1\",\"hyperplane\":\"{name}\",\
                     \"continuity_max\":{cont:e},\"jump_max\":{jump:e},\"pass\":{ok}}}\n"
                ));
            }
            text.push_str(&format!(
                "{{\"schema\":\"g2-bethe.wavecheck-energy/1\",\"max_relative_residual\":{:e},\
                 \"pass\":{}}}\n",
                energy_report.max_relative_residual, energy_ok
            ));
            if let Some((sol, report, ok)) = &circle {
                text.push_str(&format!(
                    "{{\"schema\":\"g2-bethe.wavecheck-circle/1\",\"energy\":{:e},\
                     \"value_max\":{:e},\"jump_max\":{:e},\"pass\":{}}}\n",
                    sol.energy, report.value_max, report.jump_max, ok
                ));
            }
        }
    }
    write_out(out, &text).map_err(|e| e.to_string())?;
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            samples,
            seed,
            corrupt,
            format,
            out,
        } => cmd_verify(samples, seed, corrupt, format, &out),
        Command::Solve {
            l,
            gs,
            gl,
            sector,
            qn,
            tol,
            format,
            out,
        } => cmd_solve(l, Coupling::new(gs, gl), sector, &qn, tol, format, &out),
        Command::Scan {
            l,
            gs,
            gl,
            steps,
            sector,
            qn,
            tol,
            out,
        } => cmd_scan(l, Coupling::new(gs, gl), steps, sector, qn, tol, &out),
        Command::Oracle {
            l,
            gs,
            gl,
            nmax,
            total,
            levels,
            mmax,
            tol,
            format,
            out,
        } => cmd_oracle(
            l,
            Coupling::new(gs, gl),
            nmax,
            total,
            levels,
            mmax,
            tol,
            format,
            &out,
        ),
        Command::Wavecheck {
            k,
            gs,
            gl,
            points,
            seed,
            tol,
            l,
            sector,
            qn,
            format,
            out,
        } => cmd_wavecheck(
            k.map(|ka| ka.0),
            Coupling::new(gs, gl),
            points,
            seed,
            tol,
            l,
            sector,
            qn,
            format,
            &out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
