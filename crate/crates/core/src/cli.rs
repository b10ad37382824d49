//! The `lamcli` command line.
//!
//! Data commands print compact JSON on stdout (`--pretty` switches to a
//! readable summary). Exit codes: 0 success, 1 usage, 2 domain error,
//! 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::catalog;
use crate::circle::Angle;
use crate::correspondence::{coroots, mac_data, mac_to_scm, scm_data, scm_to_mac};
use crate::error::LamError;
use crate::io::{parse_lam_json, render_svg, write_lam_json, write_lam_json_pretty, LamDocument, RenderOptions};
use crate::leaf::{Leaf, LeafImage, Polygon};
use crate::orbits::{classify, forward_orbit, kiwi_bound_check, side_orbit_count};
use crate::pullback::{canonical_mac_lamination, canonical_scm_lamination};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lamcli", version, about = "Invariant laminations of the circle under sigma_d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Degree d of sigma_d.
    #[arg(long, short = 'd', default_value_t = 2)]
    degree: u32,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long, value_parser = parse_angle)]
    angle: Option<Angle>,
    #[arg(long, value_parser = parse_leaf)]
    leaf: Option<Leaf>,
    #[arg(long, value_parser = parse_polygon)]
    polygon: Option<Polygon>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Image of an angle or leaf under sigma_d.
    Map {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        shape: Shape,
    },
    /// Forward orbit of an angle, leaf or polygon.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 4096)]
        max_iter: usize,
    },
    /// Orbit type of a leaf or polygon.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        shape: Shape,
    },
    /// Canonical MAC (--major) or SCM (--polygon) lamination.
    Pullback {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_leaf)]
        major: Option<Leaf>,
        #[arg(long, value_parser = parse_polygon)]
        polygon: Option<Polygon>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// SCM polygon of a MAC leaf.
    Mac2scm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_leaf)]
        major: Leaf,
    },
    /// MAC leaf of an SCM polygon.
    Scm2mac {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_polygon)]
        polygon: Polygon,
    },
    /// Co-roots of a MAC leaf.
    Coroots {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_leaf)]
        major: Leaf,
    },
    /// All MAC leaves with endpoint period at most --max-period.
    Catalog {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        max_period: u32,
    },
    /// Run a theorem-verification suite over the catalog.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_period: u32,
    },
    /// Render a lamination document (file or `-` for stdin) or a canonical
    /// lamination built from --major / --polygon.
    Render {
        #[command(flatten)]
        common: Common,
        input: Option<String>,
        #[arg(long, value_parser = parse_leaf)]
        major: Option<Leaf>,
        #[arg(long, value_parser = parse_polygon)]
        polygon: Option<Polygon>,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 600)]
        width: u32,
        #[arg(long)]
        labels: bool,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
}

fn parse_angle(s: &str) -> Result<Angle, String> {
    s.trim().parse().map_err(|e: LamError| e.to_string())
}

fn parse_leaf(s: &str) -> Result<Leaf, String> {
    s.parse().map_err(|e: LamError| e.to_string())
}

fn parse_polygon(s: &str) -> Result<Polygon, String> {
    s.parse().map_err(|e: LamError| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: LamError| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(LamError),
    Verify(String),
}

impl From<LamError> for Failure {
    fn from(e: LamError) -> Self {
        Failure::Domain(e)
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn one_shape(shape: &Shape) -> Result<Polygon, Failure> {
    match (&shape.angle, &shape.leaf, &shape.polygon) {
        (Some(t), None, None) => Ok(Polygon::new(vec![t.clone()])?),
        (None, Some(l), None) => Ok(Polygon::from_leaf(l)),
        (None, None, Some(p)) => Ok(p.clone()),
        _ => Err(Failure::Usage(
            "give exactly one of --angle, --leaf, --polygon".into(),
        )),
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Map { common, .. }
        | Command::Orbit { common, .. }
        | Command::Classify { common, .. }
        | Command::Pullback { common, .. }
        | Command::Mac2scm { common, .. }
        | Command::Scm2mac { common, .. }
        | Command::Coroots { common, .. }
        | Command::Catalog { common, .. }
        | Command::Check { common, .. }
        | Command::Render { common, .. } => common,
    }
}

/// Runs one command, producing the text for stdout.
fn execute(cmd: Command) -> Result<(String, Common), (Failure, Option<Common>)> {
    macro_rules! tryc {
        ($common:expr, $e:expr) => {
            match $e {
                Ok(v) => v,
                Err(f) => return Err((Failure::from(f), Some($common))),
            }
        };
    }
    let c = common_of(&cmd);
    if c.degree < 2 {
        let d = c.degree;
        return Err((Failure::Domain(LamError::InvalidDegree(d)), None));
    }
    match cmd {
        Command::Map { common, shape } => {
            let d = common.degree;
            let text = match (&shape.angle, &shape.leaf) {
                (Some(t), None) => format!("{}\n", t.sigma(d)),
                (None, Some(l)) => match l.image(d) {
                    LeafImage::Leaf(m) if common.pretty => format!("{m}\n"),
                    LeafImage::Leaf(m) => json_line(&m),
                    LeafImage::Point(p) if common.pretty => format!("critical: collapses to {p}\n"),
                    LeafImage::Point(p) => json_line(&json!({ "point": p })),
                },
                _ => {
                    return Err((
                        Failure::Usage("map takes exactly one of --angle, --leaf".into()),
                        Some(common),
                    ))
                }
            };
            Ok((text, common))
        }
        Command::Orbit { common, shape, max_iter } => {
            let p = tryc!(common, one_shape(&shape));
            let info = tryc!(common, forward_orbit(common.degree, &p, max_iter).map_err(Failure::from));
            let text = if common.pretty {
                let mut s = format!(
                    "preperiod {}, period {} (vertices {})\n",
                    info.preperiod, info.object_period, info.vertex_period
                );
                for (i, q) in info.orbit.iter().enumerate() {
                    s += &format!("  {i}: {q}\n");
                }
                s
            } else {
                json_line(&info)
            };
            Ok((text, common))
        }
        Command::Classify { common, shape } => {
            let d = common.degree;
            let p = tryc!(common, one_shape(&shape));
            let class = tryc!(common, classify(d, &p, 4096).map_err(Failure::from));
            let text = if common.pretty {
                format!(
                    "{p}: {class}, {} side orbit(s), Kiwi bound {}\n",
                    side_orbit_count(d, &p),
                    if kiwi_bound_check(d, &p, class) { "holds" } else { "violated" }
                )
            } else {
                json_line(&json!({
                    "polygon": p,
                    "class": class,
                    "side_orbits": side_orbit_count(d, &p),
                    "kiwi_bound": kiwi_bound_check(d, &p, class),
                }))
            };
            Ok((text, common))
        }
        Command::Pullback { common, major, polygon, depth, format } => {
            let d = common.degree;
            let r = match (&major, &polygon) {
                (Some(m), None) => tryc!(common, canonical_mac_lamination(d, m, depth).map_err(Failure::from)),
                (None, Some(p)) => tryc!(common, canonical_scm_lamination(d, p, depth).map_err(Failure::from)),
                _ => {
                    return Err((
                        Failure::Usage("pullback takes exactly one of --major, --polygon".into()),
                        Some(common),
                    ))
                }
            };
            let mut doc = LamDocument::from_pullback(&r);
            doc.metadata.insert("depth".into(), json!(depth));
            doc.metadata.insert("stages".into(), json!(r.stages));
            let text = match format {
                Format::Svg => tryc!(common, render_svg(&doc, &RenderOptions::default()).map_err(Failure::from)),
                Format::Json if common.pretty => write_lam_json_pretty(&doc) + "\n",
                Format::Json => write_lam_json(&doc) + "\n",
            };
            Ok((text, common))
        }
        Command::Mac2scm { common, major } => {
            let d = common.degree;
            let mac = tryc!(common, mac_data(d, &major).map_err(Failure::from));
            let scm = tryc!(common, mac_to_scm(d, &mac).map_err(Failure::from));
            let text = if common.pretty {
                let co: Vec<String> = mac.coroots.iter().map(|t| t.to_string()).collect();
                format!(
                    "SCM polygon {} ({}), co-roots [{}]\n",
                    scm.polygon,
                    scm.orbit_class,
                    co.join(", ")
                )
            } else {
                json_line(&json!({ "mac": mac, "scm": scm }))
            };
            Ok((text, common))
        }
        Command::Scm2mac { common, polygon } => {
            let d = common.degree;
            let scm = tryc!(common, scm_data(d, &polygon).map_err(Failure::from));
            let mac = tryc!(common, scm_to_mac(d, &scm).map_err(Failure::from));
            let text = if common.pretty {
                format!("MAC leaf {} ({}), minor {}\n", mac.major, mac.orbit_class, mac.minor)
            } else {
                json_line(&json!({ "scm": scm, "mac": mac }))
            };
            Ok((text, common))
        }
        Command::Coroots { common, major } => {
            let d = common.degree;
            let mac = tryc!(common, mac_data(d, &major).map_err(Failure::from));
            let co = tryc!(common, coroots(d, &mac).map_err(Failure::from));
            let text = if common.pretty {
                let s: Vec<String> = co.iter().map(|t| t.to_string()).collect();
                format!("co-roots of {}: [{}]\n", mac.major, s.join(", "))
            } else {
                json_line(&co)
            };
            Ok((text, common))
        }
        Command::Catalog { common, max_period } => {
            let d = common.degree;
            let list = tryc!(common, catalog(d, max_period).map_err(Failure::from));
            let text = if common.pretty {
                let mut s = format!("{} MAC leaves for d = {d}, period <= {max_period}\n", list.len());
                for m in &list {
                    s += &format!("  {} period {} {}\n", m.major, m.period, m.orbit_class);
                }
                s
            } else {
                json_line(&list)
            };
            Ok((text, common))
        }
        Command::Check { common, suite, max_period } => {
            let reports = tryc!(common, run_suite(suite, common.degree, max_period).map_err(Failure::from));
            let text = if common.pretty {
                let mut s = String::new();
                for r in &reports {
                    s += &format!("{} {r}\n", if r.ok() { "PASS" } else { "FAIL" });
                    for f in &r.failures {
                        s += &format!("    {f}\n");
                    }
                }
                s
            } else {
                json_line(&reports)
            };
            if reports.iter().all(|r| r.ok()) {
                Ok((text, common))
            } else {
                Err((Failure::Verify(text), Some(common)))
            }
        }
        Command::Render { common, input, major, polygon, depth, width, labels, format } => {
            let d = common.degree;
            let doc = match (&input, &major, &polygon) {
                (Some(path), None, None) => {
                    let text = match read_input(path) {
                        Ok(t) => t,
                        Err(e) => return Err((Failure::Usage(format!("{path}: {e}")), Some(common))),
                    };
                    tryc!(common, parse_lam_json(&text).map_err(Failure::from))
                }
                (None, Some(m), None) => LamDocument::from_pullback(&tryc!(
                    common,
                    canonical_mac_lamination(d, m, depth).map_err(Failure::from)
                )),
                (None, None, Some(p)) => LamDocument::from_pullback(&tryc!(
                    common,
                    canonical_scm_lamination(d, p, depth).map_err(Failure::from)
                )),
                _ => {
                    return Err((
                        Failure::Usage("render takes one of INPUT, --major, --polygon".into()),
                        Some(common),
                    ))
                }
            };
            let text = match format {
                Format::Json => write_lam_json(&doc) + "\n",
                Format::Svg => {
                    let opts = RenderOptions {
                        width_px: width,
                        draw_labels: labels,
                        ..Default::default()
                    };
                    tryc!(common, render_svg(&doc, &opts).map_err(Failure::from))
                }
            };
            Ok((text, common))
        }
    }
}

fn read_input(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn emit(text: &str, common: Option<&Common>, out: &mut dyn Write) -> io::Result<()> {
    match common.and_then(|c| c.out.as_ref()) {
        Some(path) => fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, common)) => match emit(&text, Some(&common), out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "lamcli: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err((Failure::Usage(msg), _)) => {
            let _ = writeln!(err, "lamcli: {msg}");
            EXIT_USAGE
        }
        Err((Failure::Domain(e), _)) => {
            let _ = writeln!(err, "lamcli: {e}");
            EXIT_DOMAIN
        }
        Err((Failure::Verify(text), common)) => {
            let _ = emit(&text, common.as_ref(), out);
            let _ = writeln!(err, "lamcli: verification failed");
            EXIT_VERIFY
        }
    }
}

