use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qes_core::{certificate, crossing, family::Family, locus, shooting, QesError};
use rayon::prelude::*;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qes", version, about = "Spectra of the quartic QES oscillator family")]
struct Cli {
    /// JSON file with default tolerances: {"rtol": .., "tol": .., "samples": .., "seed": ..}
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact family data: wave coefficients, quantization
    /// polynomial in both variable pairs, and the certificate constant
    Table(TableArgs),
    /// QES eigenvalues at a parameter value, from the closed-form
    /// quantization polynomial
    Eigen(EigenArgs),
    /// Trace the real spectral locus and label its branches
    Locus(LocusArgs),
    /// Fold points of the real locus, isolated exactly
    Critical(CriticalArgs),
    /// Level crossings along the node-free branch
    Crossings(CrossingsArgs),
    /// Sample the shooting determinant over a window of real lambda
    Detscan(DetscanArgs),
    /// Real eigenvalues of the rotated operator found by sign changes of
    /// the shooting determinant
    Spectrum(SpectrumArgs),
    /// Pass/fail checks of the structural identities
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EigenArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LocusArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 100.0)]
    b_hi: f64,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    b_floor: f64,
    /// Emit every traced point as CSV instead of the component summary
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CrossingsArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DetscanArgs {
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    lo: f64,
    #[arg(long, default_value_t = 30.0)]
    hi: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Subcommand)]
enum Check {
    /// Product certificate: exact in the quotient ring for small degrees,
    /// least-squares residuals at sampled locus points, off-locus control
    Identity(IdentityArgs),
    /// Certificate constant against the scaled a-derivative of the
    /// quantization polynomial
    Constant(IdentityArgs),
    /// Top-graded part against the closed-form product
    Topweight(DegreeOnly),
    /// Degree in b of the a-discriminant against the triangular law
    Discriminant(DegreeOnly),
    /// Large-b level law residuals
    Asymptotics(AsymptoticsArgs),
    /// Non-QES spectrum against the reflected operator, via shooting
    Reality(RealityArgs),
    /// Electrostatic equilibrium of the wave-polynomial zeros at a locus
    /// point
    Equilibrium(EquilibriumArgs),
}

#[derive(Args)]
struct DegreeOnly {
    #[arg(long)]
    degree: usize,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 1e4)]
    b: f64,
}

#[derive(Args)]
struct RealityArgs {
    #[arg(long)]
    j: u32,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 6)]
    count: usize,
    #[arg(long)]
    rtol: Option<f64>,
    /// Shooting radius; raise above the automatic choice when matching
    /// high levels to tight tolerances
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args)]
struct EquilibriumArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Which spectral point to inspect, in ascending lambda order
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Deserialize, Default)]
struct Config {
    rtol: Option<f64>,
    tol: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
}

fn main() -> ExitCode {
    if let Err(code) = precision_guard() {
        return code;
    }
    let cli = Cli::parse();
    let config = match load_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {:#}", e);
            return ExitCode::from(2);
        }
    };
    match run(cli.command, &config) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            let usage = e
                .downcast_ref::<QesError>()
                .map(|q| matches!(q, QesError::Usage(_)))
                .unwrap_or(false);
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

/// The backend computes in f64. A caller requesting more precision via the
/// environment gets a clean refusal instead of silently degraded digits.
fn precision_guard() -> Result<(), ExitCode> {
    match std::env::var("QES_PRECISION_BITS") {
        Err(_) => Ok(()),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(bits) if bits <= 53 => Ok(()),
            Ok(bits) => {
                eprintln!("error: QES_PRECISION_BITS={} exceeds the 53-bit backend", bits);
                Err(ExitCode::from(2))
            }
            Err(_) => {
                eprintln!("error: QES_PRECISION_BITS={:?} is not a number", s);
                Err(ExitCode::from(2))
            }
        },
    }
}

fn load_config(path: &Option<PathBuf>) -> anyhow::Result<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.12e} {:+.12e}i", z.re, z.im)
}

fn run(cmd: Command, config: &Config) -> anyhow::Result<bool> {
    match cmd {
        Command::Table(args) => table(args),
        Command::Eigen(args) => eigen(args, config),
        Command::Locus(args) => locus_cmd(args),
        Command::Critical(args) => critical(args),
        Command::Crossings(args) => crossings(args),
        Command::Detscan(args) => detscan(args, config),
        Command::Spectrum(args) => spectrum(args, config),
        Command::Verify { check } => verify(check, config),
    }
}

fn table(args: TableArgs) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let constant = certificate::constant_from_qstar(&fam);
    if args.json {
        let doc = serde_json::json!({
            "family": fam.to_json(),
            "constant": constant.to_term_strings(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(true);
    }
    println!("degree n = {}", fam.n());
    println!("wave polynomial coefficients (z^{{n-j}} carries a_j):");
    for j in 0..=fam.n() {
        println!("  a_{} = {}", j, fam.coeff(j));
    }
    println!("quantization polynomial (a-form):      {}", fam.qstar());
    println!("quantization polynomial (lambda-form): {}", fam.qlambda());
    println!("certificate constant:                  {}", constant);
    Ok(true)
}

fn eigen(args: EigenArgs, config: &Config) -> anyhow::Result<bool> {
    let tol = args.tol.or(config.tol).unwrap_or(1e-12);
    let fam = Family::build(args.degree)?;
    let pts = fam.eigenvalues_at(args.b, tol)?;
    if args.json {
        let rows: Vec<_> = pts
            .iter()
            .map(|p| {
                serde_json::json!({
                    "lambda": [p.lambda.re, p.lambda.im],
                    "a": [p.a.re, p.a.im],
                    "residual": p.residual,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(true);
    }
    println!("QES block of degree {} at b = {:.12e} ({} levels)", args.degree, args.b, pts.len());
    for p in &pts {
        println!("  lambda = {}   a = {}   residual {:.2e}", fmt_c(p.lambda), fmt_c(p.a), p.residual);
    }
    Ok(true)
}

fn locus_cmd(args: LocusArgs) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let sys = locus::analyze_branches(&fam, args.b_hi, args.b_floor)?;
    if args.trace {
        println!("# schema: qes.locus/1");
        println!("component,b,a,lambda,real_zeros");
        let roots = locus::branch_roots_at(&fam, args.b_hi)?;
        for (ci, comp) in sys.components.iter().enumerate() {
            let start = roots[comp.root_indices[0]];
            let trace = locus::trace_branch(&fam, args.b_hi, start, args.b_floor, 0.5)?;
            for p in &trace.points {
                println!(
                    "{},{:.12e},{:.12e},{:.12e},{}",
                    ci, p.b, p.a, p.lambda, p.real_zeros
                );
            }
        }
        return Ok(true);
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&sys)?);
        return Ok(true);
    }
    println!(
        "real locus of degree {} anchored at b = {:.3e}: {} components",
        sys.n,
        sys.b_hi,
        sys.components.len()
    );
    for c in &sys.components {
        let fold = match c.fold_b {
            Some(b) => format!("fold at b = {:.12e}", b),
            None => "no fold (open arm)".to_string(),
        };
        println!(
            "  m = {}: {} real zeros, lambda in [{:.12e}, {:.12e}], {}",
            c.m, c.real_zeros, c.lambda_lo, c.lambda_hi, fold
        );
    }
    Ok(true)
}

fn critical(args: CriticalArgs) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let pts = locus::critical_points(&fam)?;
    if args.json {
        let rows: Vec<_> = pts
            .iter()
            .map(|(b, a)| serde_json::json!({"b": b, "a": a, "lambda": b * b - 2.0 * a}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(true);
    }
    println!("real fold points of degree {}: {}", args.degree, pts.len());
    for (b, a) in &pts {
        println!("  b = {:.12e}   a = {:.12e}   lambda = {:.12e}", b, a, b * b - 2.0 * a);
    }
    Ok(true)
}

fn crossings(args: CrossingsArgs) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let found = crossing::find_crossings(&fam, args.count)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&found)?);
        return Ok(true);
    }
    println!("# schema: qes.crossings/1");
    println!("k,b,lambda,phi_residual,bracket_width");
    for c in &found {
        println!(
            "{},{:.12e},{:.12e},{:.2e},{:.2e}",
            c.k, c.b, c.lambda, c.phi_residual, c.bracket_width
        );
    }
    Ok(true)
}

fn detscan(args: DetscanArgs, config: &Config) -> anyhow::Result<bool> {
    if args.points < 2 {
        bail!(QesError::Usage("detscan needs at least two points".into()));
    }
    let rtol = args.rtol.or(config.rtol).unwrap_or(1e-10);
    let step = (args.hi - args.lo) / (args.points - 1) as f64;
    let lambdas: Vec<f64> = (0..args.points).map(|i| args.lo + step * i as f64).collect();
    let samples: Vec<_> = lambdas
        .par_iter()
        .map(|&l| shooting::spectral_det(args.j, args.b, Complex64::new(l, 0.0), args.radius, rtol))
        .collect::<Result<_, _>>()?;
    println!("# schema: qes.detscan/1");
    println!("lambda,det_re,det_im,logscale");
    for s in &samples {
        println!(
            "{:.12e},{:.12e},{:.12e},{:.12e}",
            s.lambda.re, s.det.re, s.det.im, s.logscale
        );
    }
    Ok(true)
}

fn spectrum(args: SpectrumArgs, config: &Config) -> anyhow::Result<bool> {
    let rtol = args.rtol.or(config.rtol).unwrap_or(1e-10);
    let tol = args.tol.or(config.tol).unwrap_or(1e-8);
    let found =
        shooting::real_eigenvalues_in(args.j, args.b, args.lo, args.hi, tol, args.radius, rtol)?;
    println!(
        "real spectrum of J = {:.6}, b = {:.6e} in [{:.3e}, {:.3e}]: {} levels",
        args.j,
        args.b,
        args.lo,
        args.hi,
        found.len()
    );
    for e in &found {
        println!(
            "  lambda = {:.12e}   bracket {:.2e}   dip ratio {:.2e}",
            e.lambda, e.bracket, e.dip_ratio
        );
    }
    Ok(true)
}

fn verify(check: Check, config: &Config) -> anyhow::Result<bool> {
    match check {
        Check::Identity(args) => verify_identity(args, config),
        Check::Constant(args) => verify_constant(args, config),
        Check::Topweight(args) => verify_topweight(args),
        Check::Discriminant(args) => verify_discriminant(args),
        Check::Asymptotics(args) => verify_asymptotics(args),
        Check::Reality(args) => verify_reality(args, config),
        Check::Equilibrium(args) => verify_equilibrium(args, config),
    }
}

fn verify_identity(args: IdentityArgs, config: &Config) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let samples = args.samples.or(config.samples).unwrap_or(20);
    let seed = args.seed.or(config.seed).unwrap_or(7);

    let exact_note = if args.degree <= 4 {
        match certificate::exact_certificate(&fam) {
            Ok(_) => "exact quotient-ring certificate holds; ".to_string(),
            Err(e) => {
                println!("identity: FAIL (exact certificate: {})", e);
                return Ok(false);
            }
        }
    } else {
        String::new()
    };

    let pts = certificate::sample_locus_points(&fam, samples, seed);
    let residuals: Vec<f64> = pts
        .par_iter()
        .map(|&(b, a)| {
            certificate::numeric_certificate(&fam, a, Complex64::from(b)).map(|c| c.residual)
        })
        .collect::<Result<_, _>>()?;
    let worst = residuals.iter().cloned().fold(0.0, f64::max);

    // nudging b off the locus must break the identity
    let (b0, a0) = pts[0];
    let control = certificate::numeric_certificate(&fam, a0, Complex64::from(b0 + 0.1))?.residual;

    let pass = worst < 1e-8 && control > 1e-3;
    println!(
        "identity: {} ({}{} locus points, max residual {:.2e}; off-locus control {:.2e})",
        if pass { "PASS" } else { "FAIL" },
        exact_note,
        pts.len(),
        worst,
        control
    );
    Ok(pass)
}

fn verify_constant(args: IdentityArgs, config: &Config) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let claimed = certificate::constant_from_qstar(&fam);

    if args.degree <= 4 {
        let cert = certificate::exact_certificate(&fam)?;
        let reduced = claimed.reduce_mod_monic_x(fam.qstar());
        let pass = reduced == cert.c;
        println!(
            "constant: {} (exact comparison in the quotient ring, degree {})",
            if pass { "PASS" } else { "FAIL" },
            args.degree
        );
        return Ok(pass);
    }

    let samples = args.samples.or(config.samples).unwrap_or(12);
    let seed = args.seed.or(config.seed).unwrap_or(11);
    let pts = certificate::sample_locus_points(&fam, samples, seed);
    let mut worst = 0.0f64;
    for &(b, a) in &pts {
        let num = certificate::numeric_certificate(&fam, a, Complex64::from(b))?;
        let direct = claimed.eval_complex(a, Complex64::from(b));
        let rel = (num.c - direct).norm() / direct.norm().max(1e-300);
        worst = worst.max(rel);
    }
    let pass = worst < 1e-8;
    println!(
        "constant: {} ({} locus points, max relative gap {:.2e})",
        if pass { "PASS" } else { "FAIL" },
        pts.len(),
        worst
    );
    Ok(pass)
}

fn verify_topweight(args: DegreeOnly) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let pass = fam.qstar().top_weight_part() == locus::top_weight_reference(args.degree)?;
    println!(
        "topweight: {} (degree {})",
        if pass { "PASS" } else { "FAIL" },
        args.degree
    );
    Ok(pass)
}

fn verify_discriminant(args: DegreeOnly) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let (got, want) = locus::discriminant_degree(&fam)?;
    let pass = got == want;
    println!(
        "discriminant: {} (deg_b = {}, triangular law gives {})",
        if pass { "PASS" } else { "FAIL" },
        got,
        want
    );
    Ok(pass)
}

fn verify_asymptotics(args: AsymptoticsArgs) -> anyhow::Result<bool> {
    let fam = Family::build(args.degree)?;
    let res = locus::asymptotic_residuals(&fam, args.b)?;
    let worst = res.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let budget = if args.degree == 1 { 1e-8 } else { 0.1 };
    let pass = worst < budget;
    println!(
        "asymptotics: {} (degree {}, b = {:.3e}, max |residual| {:.2e}, budget {:.0e})",
        if pass { "PASS" } else { "FAIL" },
        args.degree,
        args.b,
        worst,
        budget
    );
    Ok(pass)
}

fn verify_reality(args: RealityArgs, config: &Config) -> anyhow::Result<bool> {
    if args.j == 0 {
        bail!(QesError::Usage("reality check needs J >= 1".into()));
    }
    let rtol = args.rtol.or(config.rtol).unwrap_or(1e-10);
    let fam = Family::build(args.j as usize - 1)?;
    let qes: Vec<f64> = fam
        .eigenvalues_at(args.b, 1e-12)?
        .iter()
        .filter(|p| p.lambda.im.abs() < 1e-8 * (1.0 + p.lambda.norm()))
        .map(|p| p.lambda.re)
        .collect();

    let j = args.j as f64;
    let lo = -2.0;
    let mut hi = 20.0;
    let (plus, minus) = loop {
        let plus: Vec<_> =
            shooting::real_eigenvalues_in(j, args.b, lo, hi, 1e-9, args.radius, rtol)?
                .into_iter()
                .filter(|e| qes.iter().all(|q| (e.lambda - q).abs() > 1e-4))
                .collect();
        if plus.len() >= args.count || hi > 250.0 {
            let minus =
                shooting::real_eigenvalues_in(-j, args.b, lo, hi, 1e-9, args.radius, rtol)?;
            break (plus, minus);
        }
        hi += 15.0;
    };

    if plus.len() < args.count || minus.len() < args.count {
        println!(
            "reality: FAIL (found {} non-QES levels of L_J and {} of the reflection, needed {})",
            plus.len(),
            minus.len(),
            args.count
        );
        return Ok(false);
    }
    let mut worst = 0.0f64;
    for k in 0..args.count {
        worst = worst.max((plus[k].lambda - minus[k].lambda).abs());
    }
    let im_bound = plus
        .iter()
        .take(args.count)
        .map(|e| e.bracket)
        .fold(0.0, f64::max);
    let pass = worst < 1e-6 && im_bound < 1e-6;
    println!(
        "reality: {} (J = {}, b = {:.3e}: first {} non-QES levels match the reflection to {:.2e}, Im bound {:.2e})",
        if pass { "PASS" } else { "FAIL" },
        args.j,
        args.b,
        args.count,
        worst,
        im_bound
    );
    Ok(pass)
}

fn verify_equilibrium(args: EquilibriumArgs, config: &Config) -> anyhow::Result<bool> {
    let tol = config.tol.unwrap_or(1e-12);
    let fam = Family::build(args.degree)?;
    let pts = fam.eigenvalues_at(args.b, tol)?;
    let pt = pts.get(args.index).ok_or_else(|| {
        QesError::Usage(format!(
            "spectral index {} out of range ({} levels)",
            args.index,
            pts.len()
        ))
    })?;
    let report = qes_core::equilibrium::equilibrium_report(&fam, pt.a, Complex64::from(args.b), tol)?;
    let pass = report.max_residual < 1e-8 && report.divisibility_defect < 1e-8;
    println!(
        "equilibrium: {} (degree {}, b = {:.3e}, level {}: max force residual {:.2e}, divisibility defect {:.2e})",
        if pass { "PASS" } else { "FAIL" },
        args.degree,
        args.b,
        args.index,
        report.max_residual,
        report.divisibility_defect
    );
    Ok(pass)
}
