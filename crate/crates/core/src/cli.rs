//! Command-line front end.
//!
//! Thin adapters only: every subcommand parses its inputs, calls the
//! corresponding library operation and serializes the result. Floats are
//! printed with 17 significant digits so identical requests produce
//! byte-identical output. Exit codes: 0 success, 1 domain error, 2 usage
//! error.
//!
//! JSON outputs carry `"schema_version": 1`. Pose inputs are
//! `x,y,z,q1,q2,q3,q4`; joint inputs are
//! `rho1y,rho1z,rho2y,rho2z,rho3y,rho3z`, matching the constraint-equation
//! order.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::kinematics::{self, SolverOptions};
use crate::model::{ActuatedJoints, Pose, UnitQuaternion};
use crate::selfmotion;
use crate::singularity;
use crate::textfmt::{fmt_f64, to_json_string};

pub const SCHEMA_VERSION: u32 = 1;

/// Comma-separated pose `x,y,z,q1,q2,q3,q4`.
#[derive(Debug, Clone, Copy)]
pub struct PoseArg(pub [f64; 7]);

impl FromStr for PoseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self(parse_fixed(s, "pose")?))
    }
}

/// Comma-separated joints `rho1y,rho1z,rho2y,rho2z,rho3y,rho3z`.
#[derive(Debug, Clone, Copy)]
pub struct JointsArg(pub [f64; 6]);

impl FromStr for JointsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self(parse_fixed(s, "joints")?))
    }
}

fn parse_fixed<const N: usize>(s: &str, what: &str) -> Result<[f64; N], String> {
    let fields: Vec<&str> = s.split(',').collect();
    if fields.len() != N {
        return Err(format!("{what} needs {N} comma-separated values, got {}", fields.len()));
    }
    let mut out = [0.0; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("invalid number {field:?}: {e}"))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Solver and sampler knobs shared by several subcommands. Unset flags fall
/// back to the config file, then to the built-in defaults.
#[derive(Debug, Clone, Copy, Default, Parser)]
pub struct SolverFlags {
    /// Newton iteration cap per seed.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Convergence tolerance on the residual infinity-norm.
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// Seed-grid density (1 = base grid).
    #[arg(long)]
    pub seed_density: Option<u32>,
}

#[derive(Debug, Parser)]
#[command(
    name = "pppps",
    version,
    about = "Kinematics, self-motion and singularity analysis of the 3-PPPS parallel robot"
)]
pub struct Cli {
    /// TOML config file providing defaults for solver flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form inverse kinematics of a pose.
    Ik {
        /// Pose as x,y,z,q1,q2,q3,q4.
        #[arg(long, allow_hyphen_values = true)]
        pose: PoseArg,
    },
    /// Numerical direct kinematics of actuated joint values.
    Dk {
        /// Joints as rho1y,rho1z,rho2y,rho2z,rho3y,rho3z.
        #[arg(long, allow_hyphen_values = true)]
        joints: JointsArg,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Planar quadratic direct kinematics (requires rho_iz = 0).
    PlanarDk {
        #[arg(long, allow_hyphen_values = true)]
        joints: JointsArg,
    },
    /// Evaluate the joint-space self-motion condition.
    SelfmotionCheck {
        #[arg(long, allow_hyphen_values = true)]
        joints: JointsArg,
    },
    /// Sample the Cardanic pose family as CSV.
    SelfmotionTrace {
        #[arg(long, allow_hyphen_values = true)]
        joints: JointsArg,
        /// Number of equally spaced theta samples.
        #[arg(long)]
        samples: Option<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singularity report at a pose.
    Singularity {
        #[arg(long, allow_hyphen_values = true)]
        pose: PoseArg,
    },
    /// Sample the singularity surfaces and self-motion circle as CSV.
    Surfaces {
        /// Grid resolution per chart direction (minimum 8).
        #[arg(long)]
        resolution: Option<u32>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference validation of the velocity relation at a pose.
    VelocityCheck {
        #[arg(long, allow_hyphen_values = true)]
        pose: PoseArg,
        /// Number of sampled twist directions.
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// Defaults loadable from a TOML config file. Keys mirror the flags.
#[derive(Debug, Clone, Copy, Default)]
struct ConfigDefaults {
    max_iterations: Option<usize>,
    residual_tol: Option<f64>,
    seed_density: Option<u32>,
    samples: Option<usize>,
    resolution: Option<u32>,
}

fn load_config(path: &PathBuf) -> Result<ConfigDefaults, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let table: toml::Table =
        text.parse().map_err(|e| format!("invalid config {}: {e}", path.display()))?;
    let int = |key: &str| -> Result<Option<i64>, String> {
        match table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_integer()
                .map(Some)
                .ok_or_else(|| format!("config key {key} must be an integer")),
        }
    };
    let float = |key: &str| -> Result<Option<f64>, String> {
        match table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .map(Some)
                .ok_or_else(|| format!("config key {key} must be a number")),
        }
    };
    Ok(ConfigDefaults {
        max_iterations: int("max_iterations")?.map(|v| v as usize),
        residual_tol: float("residual_tol")?,
        seed_density: int("seed_density")?.map(|v| v as u32),
        samples: int("samples")?.map(|v| v as usize),
        resolution: int("resolution")?.map(|v| v as u32),
    })
}

/// The produced output text and where it should go.
#[derive(Debug)]
pub struct RunOutput {
    pub text: String,
    pub out_file: Option<PathBuf>,
}

fn pose_from_arg(arg: &PoseArg) -> Result<Pose, Error> {
    let [x, y, z, q1, q2, q3, q4] = arg.0;
    Pose::new(x, y, z, UnitQuaternion::new(q1, q2, q3, q4)?)
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    payload: T,
}

fn json<T: Serialize>(command: &'static str, payload: T) -> String {
    let mut text = to_json_string(&Envelope { schema_version: SCHEMA_VERSION, command, payload });
    text.push('\n');
    text
}

/// Dispatches a parsed request to the library. Pure except for reading the
/// optional config file.
pub fn run(cli: &Cli) -> Result<RunOutput, String> {
    let defaults = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigDefaults::default(),
    };
    let solver_options = |flags: &SolverFlags| {
        let mut opts = SolverOptions::default();
        if let Some(v) = flags.max_iterations.or(defaults.max_iterations) {
            opts.max_iterations = v;
        }
        if let Some(v) = flags.residual_tol.or(defaults.residual_tol) {
            opts.residual_tol = v;
        }
        if let Some(v) = flags.seed_density.or(defaults.seed_density) {
            opts.seed_density = v;
        }
        opts
    };
    let domain = |e: Error| e.to_string();

    match &cli.command {
        Command::Ik { pose } => {
            let pose = pose_from_arg(pose).map_err(domain)?;
            #[derive(Serialize)]
            struct Payload {
                pose: Pose,
                joints: crate::model::FullJointState,
            }
            let joints = kinematics::inverse_kinematics(&pose);
            Ok(RunOutput { text: json("ik", Payload { pose, joints }), out_file: None })
        }
        Command::Dk { joints, solver } => {
            let joints = ActuatedJoints::from_array(joints.0);
            let opts = solver_options(solver);
            let outcome = kinematics::direct_kinematics(&joints, &opts).map_err(domain)?;
            #[derive(Serialize)]
            struct Payload {
                joints: ActuatedJoints,
                outcome: kinematics::DkOutcome,
            }
            Ok(RunOutput { text: json("dk", Payload { joints, outcome }), out_file: None })
        }
        Command::PlanarDk { joints } => {
            let joints = ActuatedJoints::from_array(joints.0);
            let quadratic = kinematics::planar_quadratic_coefficients(&joints).map_err(domain)?;
            let solutions = kinematics::planar_direct_kinematics(&joints).map_err(domain)?;
            #[derive(Serialize)]
            struct Payload {
                joints: ActuatedJoints,
                quadratic: kinematics::PlanarQuadratic,
                solutions: Vec<kinematics::PlanarSolution>,
            }
            Ok(RunOutput {
                text: json("planar-dk", Payload { joints, quadratic, solutions }),
                out_file: None,
            })
        }
        Command::SelfmotionCheck { joints } => {
            let joints = ActuatedJoints::from_array(joints.0);
            #[derive(Serialize)]
            struct Payload {
                joints: ActuatedJoints,
                check: selfmotion::SelfMotionCheck,
            }
            let check = selfmotion::self_motion_condition(&joints);
            Ok(RunOutput {
                text: json("selfmotion-check", Payload { joints, check }),
                out_file: None,
            })
        }
        Command::SelfmotionTrace { joints, samples, out } => {
            let joints = ActuatedJoints::from_array(joints.0);
            let family = selfmotion::cardanic_family(&joints).map_err(domain)?;
            let n = samples.or(defaults.samples).unwrap_or(360);
            let mut text = String::from("theta,x,y,z,q1,q2,q3,q4,max_residual\n");
            for (theta, pose) in family.sample(n) {
                let q = pose.orientation;
                let res = crate::model::max_constraint_residual(&pose, &joints);
                writeln!(
                    text,
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_f64(theta),
                    fmt_f64(pose.x),
                    fmt_f64(pose.y),
                    fmt_f64(pose.z),
                    fmt_f64(q.q1),
                    fmt_f64(q.q2),
                    fmt_f64(q.q3),
                    fmt_f64(q.q4),
                    fmt_f64(res)
                )
                .expect("string write");
            }
            Ok(RunOutput { text, out_file: out.clone() })
        }
        Command::Singularity { pose } => {
            let pose = pose_from_arg(pose).map_err(domain)?;
            #[derive(Serialize)]
            struct Payload {
                pose: Pose,
                report: singularity::SingularityReport,
            }
            let report = singularity::singularity_report(&pose);
            Ok(RunOutput {
                text: json("singularity", Payload { pose, report }),
                out_file: None,
            })
        }
        Command::Surfaces { resolution, out } => {
            let res = resolution.or(defaults.resolution).unwrap_or(64);
            let points = singularity::sample_singularity_surfaces(res).map_err(domain)?;
            let mut text = String::from("surface_id,q2,q3,q4\n");
            for p in points {
                writeln!(
                    text,
                    "{},{},{},{}",
                    p.surface.csv_name(),
                    fmt_f64(p.q2),
                    fmt_f64(p.q3),
                    fmt_f64(p.q4)
                )
                .expect("string write");
            }
            Ok(RunOutput { text, out_file: out.clone() })
        }
        Command::VelocityCheck { pose, samples } => {
            let pose = pose_from_arg(pose).map_err(domain)?;
            let n = samples.or(defaults.samples).unwrap_or(10);
            #[derive(Serialize)]
            struct Payload {
                pose: Pose,
                report: singularity::VelocityCheckReport,
            }
            let report = singularity::velocity_consistency_check(&pose, n);
            Ok(RunOutput {
                text: json("velocity-check", Payload { pose, report }),
                out_file: None,
            })
        }
    }
}

/// Binary entry point; returns the process exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => match output.out_file {
            Some(path) => match std::fs::write(&path, &output.text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(1)
                }
            },
            None => {
                print!("{}", output.text);
                ExitCode::SUCCESS
            }
        },
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
