//! Command-line front end: classification figures, sector-containment
//! verification suites, counterexample reproduction, and modulus-principle
//! checks. Emits deterministic JSON reports and SVG figures.
//!
//! Exit codes: 0 success, 1 completed with failing checks, 2 configuration
//! error, 3 consistency/violation error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use dichotomap::classifier::{classify, label_components, rasterize_curves, Status};
use dichotomap::geometry::{boundary_pieces, interior_samples, trace_image, DomainSpec, Viewport};
use dichotomap::haagerup;
use dichotomap::maps::{parse_expr, MapSpec};
use dichotomap::modulus;
use dichotomap::report::ReportDoc;
use dichotomap::svg::render_figure;
use dichotomap::{Error, PrecisionCtx, Result};

#[derive(Parser)]
#[command(name = "dichotomap", version, about = "Region classification for images of holomorphic maps")]
struct Cli {
    /// Working mantissa bits (defaults to DICHOTOMAP_BITS, else per-command)
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    out_json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Trace a boundary image and classify complement components
    Image {
        /// Built-in map: ex2 | joukowski | haagerup
        #[arg(long, conflicts_with = "expr")]
        map: Option<String>,
        /// Rational expression in z, e.g. "2*z/(z^2-1)"
        #[arg(long)]
        expr: Option<String>,
        /// first-quadrant | punctured-sphere | half-strip | disk:R |
        /// disk-complement:R | rect:x0,y0,x1,y1
        #[arg(long)]
        domain: Option<String>,
        /// Image-plane viewport as x0,y0,x1,y1
        #[arg(long)]
        viewport: Option<String>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long, default_value_t = 400)]
        witnesses: usize,
        /// Series exponent for --map haagerup
        #[arg(long, default_value_t = 1.9)]
        p: f64,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Write the SVG figure here
        #[arg(long)]
        out_svg: Option<PathBuf>,
    },
    /// Certify the sector-containment claims on boundary and interior grids
    VerifyAcp {
        /// Exponent(s) p in (1,2); repeatable. Default: 1.1, 1.5, 1.9
        #[arg(long = "p")]
        ps: Vec<f64>,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        /// Boundary samples per piece and p
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Reproduce the partial-sum and pair-term counterexamples
    Counterexamples {},
    /// Modulus-principle checks
    Modulus {
        /// Zero certificate for this polynomial expression
        #[arg(long)]
        fta: Option<String>,
        /// Disk radius for --fta
        #[arg(long = "R", default_value_t = 2.0)]
        radius: f64,
        /// Minimum-modulus dichotomy for this expression ("identity" = z)
        #[arg(long, conflicts_with = "fta")]
        minmp: Option<String>,
        /// Maximum-modulus check for this expression
        #[arg(long, conflicts_with_all = ["fta", "minmp"])]
        finmax: Option<String>,
        #[arg(long)]
        domain: Option<String>,
        /// Sampling density
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
}

fn parse_domain(s: &str) -> Result<DomainSpec> {
    let bad = |s: &str| Error::Config(format!("unknown domain {s:?}"));
    let d = match s {
        "first-quadrant" => DomainSpec::FirstQuadrant,
        "punctured-sphere" => DomainSpec::PuncturedSphere,
        "half-strip" => DomainSpec::HalfStrip,
        _ => {
            if let Some(r) = s.strip_prefix("disk-complement:") {
                DomainSpec::DiskComplement {
                    r: r.parse().map_err(|_| bad(s))?,
                }
            } else if let Some(r) = s.strip_prefix("disk:") {
                DomainSpec::Disk {
                    r: r.parse().map_err(|_| bad(s))?,
                }
            } else if let Some(rest) = s.strip_prefix("rect:") {
                let v: Vec<f64> = rest
                    .split(',')
                    .map(|t| t.parse().map_err(|_| bad(s)))
                    .collect::<Result<_>>()?;
                if v.len() != 4 {
                    return Err(bad(s));
                }
                DomainSpec::Rectangle {
                    x0: v[0],
                    y0: v[1],
                    x1: v[2],
                    y1: v[3],
                }
            } else {
                return Err(bad(s));
            }
        }
    };
    d.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(d)
}

fn parse_viewport(s: &str, resolution: usize) -> Result<Viewport> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad viewport {s:?}")))
        })
        .collect::<Result<_>>()?;
    if v.len() != 4 {
        return Err(Error::Config(format!("bad viewport {s:?}")));
    }
    Viewport::new(v[0], v[1], v[2], v[3], resolution).map_err(|e| Error::Config(e.to_string()))
}

fn default_viewport(d: &DomainSpec, resolution: usize) -> Result<Viewport> {
    let half = match d {
        DomainSpec::PuncturedSphere => 2.0,
        DomainSpec::Disk { r } | DomainSpec::DiskComplement { r } => 2.0 * r,
        _ => 3.0,
    };
    Viewport::new(-half, -half, half, half, resolution)
}

fn cmd_image(
    map: Option<String>,
    expr: Option<String>,
    domain: Option<String>,
    viewport: Option<String>,
    resolution: usize,
    witnesses: usize,
    p: f64,
    eps: f64,
    ctx: &PrecisionCtx,
) -> Result<(ReportDoc, DomainSpec, Option<String>)> {
    let (spec, default_domain) = match (map.as_deref(), expr.as_deref()) {
        (Some("ex2"), None) => (MapSpec::QuadrantRational, DomainSpec::FirstQuadrant),
        (Some("joukowski"), None) => (MapSpec::Joukowski, DomainSpec::PuncturedSphere),
        (Some("haagerup"), None) => (
            MapSpec::HaagerupSeries { p, target_eps: eps },
            DomainSpec::HalfStrip,
        ),
        (None, Some(src)) => {
            let e = parse_expr(src).map_err(|e| Error::Config(e.to_string()))?;
            (MapSpec::RationalExpr(e), DomainSpec::Disk { r: 1.0 })
        }
        (Some(other), None) => {
            return Err(Error::Config(format!(
                "unknown map {other:?}; expected ex2, joukowski or haagerup"
            )))
        }
        _ => return Err(Error::Config("exactly one of --map/--expr required".into())),
    };
    let d = match domain {
        Some(s) => parse_domain(&s)?,
        None => default_domain,
    };
    let vp = match viewport {
        Some(s) => parse_viewport(&s, resolution)?,
        None => default_viewport(&d, resolution)?,
    };

    let (cw, _) = vp.cell_size();
    let curves: Vec<_> = boundary_pieces(&d)
        .iter()
        .map(|piece| trace_image(&spec, piece, &vp, 0.75 * cw, ctx))
        .collect::<Result<_>>()?;
    let mut raster = rasterize_curves(&curves, &vp);
    let comps = label_components(&mut raster);
    let witness_evals: Vec<_> = interior_samples(&d, witnesses)
        .into_iter()
        .map(|z| dichotomap::maps::eval_map(&spec, z, ctx).map(|w| (z, w)))
        .collect::<Result<_>>()?;
    let finite = modulus::map_finite_on_closure(&spec, &d);
    let reports = classify(&raster, &comps, &witness_evals, finite)?;

    let mut doc = ReportDoc::new(
        "image",
        json!({
            "map": map, "expr": expr, "domain": format!("{d:?}"),
            "viewport": [vp.x0, vp.y0, vp.x1, vp.y1],
            "resolution": resolution, "witnesses": witnesses,
            "bits": ctx.mantissa_bits,
        }),
    );
    doc.set_components(&reports);
    let n_filled = reports.iter().filter(|c| c.status == Status::Filled).count();
    let n_excluded = reports.iter().filter(|c| c.status == Status::Excluded).count();
    let n_undet = reports.len() - n_filled - n_excluded;
    doc.push_check(
        "all-components-decided",
        n_undet == 0,
        format!("{n_filled} filled, {n_excluded} excluded, {n_undet} undetermined"),
    );
    let svg = render_figure(&d, &curves, &raster, &reports);
    Ok((doc, d, Some(svg)))
}

fn cmd_verify_acp(ps: Vec<f64>, grid: usize, samples: usize, ctx: &PrecisionCtx) -> Result<ReportDoc> {
    let ps = if ps.is_empty() { vec![1.1, 1.5, 1.9] } else { ps };
    for &p in &ps {
        if !(p > 1.0 && p < 2.0) {
            return Err(Error::Config(format!("p must be in (1,2), got {p}")));
        }
    }
    let mut doc = ReportDoc::new(
        "verify-acp",
        json!({"p": ps, "grid": grid, "samples": samples, "bits": ctx.mantissa_bits}),
    );
    for &p in &ps {
        let ys = haagerup::log_samples(samples);
        let g4 = haagerup::check_gamma4(p, &ys, ctx)?;
        doc.push_check(
            &format!("gamma4-p{p}"),
            g4.all_certified,
            format!("{} samples certified", g4.samples.len()),
        );
        let ts = haagerup::gamma5_samples(samples);
        let g5 = haagerup::check_gamma5(p, &ts, ctx)?;
        doc.push_check(
            &format!("gamma5-p{p}"),
            g5.all_certified,
            format!("{} samples certified", g5.samples.len()),
        );
        let g2 = haagerup::check_gamma2(p, &ys, ctx)?;
        doc.push_check(
            &format!("gamma2-p{p}"),
            g2.all_certified,
            format!("{} samples certified", g2.samples.len()),
        );
        let acp = haagerup::check_interior_acp(p, grid, grid, ctx)?;
        doc.push_check(
            &format!("interior-acp-p{p}"),
            acp.all_certified,
            format!("{}x{} grid certified inside the sector", grid, grid),
        );
    }
    Ok(doc)
}

fn cmd_counterexamples(ctx: &PrecisionCtx) -> Result<ReportDoc> {
    let mut doc = ReportDoc::new("counterexamples", json!({"bits": ctx.mantissa_bits}));
    let s = haagerup::counterexample_sum100(ctx)?;
    doc.push_check(
        "sum100-outside-sector",
        !s.in_sector && s.excess >= 3.5e-18,
        format!("excess {:.6e} at {} bits", s.excess, s.mantissa_bits),
    );
    let native = haagerup::counterexample_pairterm(&PrecisionCtx::native())?;
    let high = haagerup::counterexample_pairterm(ctx)?;
    doc.push_check(
        "pairterm-outside-sector",
        !native.in_sector && !high.in_sector,
        format!(
            "arg {:.12} at 53 bits, {:.12} at {} bits",
            native.arg, high.arg, high.mantissa_bits
        ),
    );
    Ok(doc)
}

fn cmd_modulus(
    fta: Option<String>,
    radius: f64,
    minmp: Option<String>,
    finmax: Option<String>,
    domain: Option<String>,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<ReportDoc> {
    let expr_of = |s: &str| -> Result<MapSpec> {
        let src = if s == "identity" { "z" } else { s };
        Ok(MapSpec::RationalExpr(
            parse_expr(src).map_err(|e| Error::Config(e.to_string()))?,
        ))
    };
    let mut doc = ReportDoc::new(
        "modulus",
        json!({
            "fta": fta, "R": radius, "minmp": minmp, "finmax": finmax,
            "domain": domain, "n": n, "bits": ctx.mantissa_bits,
        }),
    );
    if let Some(src) = fta {
        modulus::fta_zero_certificate(&expr_of(&src)?, radius, ctx)?;
        doc.push_check(
            "fta-zero-certificate",
            true,
            format!("w = 0 filled for {src} on the disk of radius {radius}"),
        );
    } else if let Some(src) = minmp {
        let d = parse_domain(domain.as_deref().unwrap_or("disk:1"))?;
        let r = modulus::minmp_dichotomy(&expr_of(&src)?, &d, n, ctx)?;
        doc.push_check(
            "minmp-branch",
            r.branch != modulus::Branch::Inconclusive,
            format!("branch {:?}, m = {:.6}, interior min {:.6}", r.branch, r.m_inf, r.interior_min),
        );
    } else if let Some(src) = finmax {
        let d = parse_domain(domain.as_deref().unwrap_or("disk:1"))?;
        let r = modulus::finmax_check(&expr_of(&src)?, &d, 4 * n, n, ctx)?;
        doc.push_check(
            "finmax",
            true,
            format!("interior max {:.6} <= boundary sup {:.6} + tol {:.2e}", r.interior_max, r.m_sup, r.tol),
        );
    } else {
        return Err(Error::Config(
            "one of --fta/--minmp/--finmax is required".into(),
        ));
    }
    Ok(doc)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Config(_) | Error::Parse { .. } | Error::Precision(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

fn bits_for(cli_bits: Option<u32>, default: u32) -> Result<PrecisionCtx> {
    let bits = match cli_bits {
        Some(b) => b,
        None => match std::env::var("DICHOTOMAP_BITS") {
            Ok(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("bad DICHOTOMAP_BITS {v:?}")))?,
            Err(_) => default,
        },
    };
    PrecisionCtx::new(bits).map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<ReportDoc> {
    match cli.cmd {
        Cmd::Image {
            map,
            expr,
            domain,
            viewport,
            resolution,
            witnesses,
            p,
            eps,
            out_svg,
        } => {
            let ctx = bits_for(cli.bits, 53)?;
            let (doc, _, svg) = cmd_image(
                map, expr, domain, viewport, resolution, witnesses, p, eps, &ctx,
            )?;
            if let (Some(path), Some(svg)) = (out_svg, svg) {
                std::fs::write(path, svg)?;
            }
            Ok(doc)
        }
        Cmd::VerifyAcp { ps, grid, samples } => {
            let ctx = bits_for(cli.bits, 53)?;
            cmd_verify_acp(ps, grid, samples, &ctx)
        }
        Cmd::Counterexamples {} => {
            let ctx = bits_for(cli.bits, 212)?;
            cmd_counterexamples(&ctx)
        }
        Cmd::Modulus {
            fta,
            radius,
            minmp,
            finmax,
            domain,
            n,
        } => {
            let ctx = bits_for(cli.bits, 53)?;
            cmd_modulus(fta, radius, minmp, finmax, domain, n, &ctx)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let out_json = cli.out_json.clone();
    let started = Instant::now();
    match run(cli) {
        Ok(doc) => {
            for c in &doc.checks {
                println!(
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(path) = out_json {
                if let Err(e) = doc.write_to(&path) {
                    eprintln!("error: {e}");
                    std::process::exit(2);
                }
            } else {
                print!("{}", doc.to_json());
            }
            eprintln!("elapsed: {} ms", started.elapsed().as_millis());
            std::process::exit(if doc.all_pass() { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
