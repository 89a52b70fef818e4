//! `orbikit`: JSON front end to the orbikit library.

mod commands;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "orbikit", version, about = "Homological algebra over orbit categories of finite groups")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timing in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct CategoryArgs {
    /// Category file `{group, family}`.
    #[arg(long, conflicts_with_all = ["group", "family"])]
    pub category: Option<PathBuf>,
    #[arg(long, requires = "family")]
    pub group: Option<PathBuf>,
    #[arg(long, requires = "group")]
    pub family: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CatPrint {
    Objects,
    Morphisms,
    Lengths,
    Aut,
}

#[derive(Subcommand)]
pub enum ModuleCmd {
    /// The free module `R[G/H]` at an object.
    Free {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        object: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The permutation module `R[G/K]` for any subgroup `K`, given as generator cycles.
    Permutation {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restriction to the orbit category of a subgroup.
    Restrict {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induction from the orbit category of a subgroup of the given category's group.
    Induce {
        #[arg(long)]
        module: PathBuf,
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `E_x V` for a module `V` over the automorphisms of `x`.
    Ex {
        #[arg(long)]
        module: PathBuf,
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        object: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `S_x M` as a module over the automorphisms of `x`.
    Sx {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Projectivity with a splitting certificate.
    Isproj {
        #[arg(long)]
        module: PathBuf,
    },
    /// Class in `K_0` of free modules.
    K0 {
        #[arg(long)]
        module: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum Command {
    /// Objects, morphism counts, lengths or automorphism groups of an orbit category.
    Cat {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long, value_enum, default_value = "objects")]
        print: CatPrint,
    },
    /// Module constructions and tests.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Objectwise homology of a complex.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        /// Reduced homology through the augmentation.
        #[arg(long)]
        reduced: bool,
    },
    /// Join tensor of two augmented complexes.
    Join {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finiteness obstruction of a complex with recorded decomposition.
    Euler {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Moore, sphere and orientation tests against a dimension function.
    CheckSphere {
        #[arg(long)]
        complex: PathBuf,
        /// Values in object order (`2,0,0,0`) or by name (`1=2,C4=0,…`).
        #[arg(long)]
        dimfn: String,
    },
    /// Minimal free resolution.
    Resolve {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Dimensions of `Ext^n(M, N)`.
    Ext {
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        n: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
    /// Coresolution by the functors `D_Q`.
    Coresolve {
        #[arg(long)]
        module: PathBuf,
    },
    /// Bredon chain complex of the subdivided octahedron under its rotation group.
    Octahedron {
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bredon chain complex of a `G`-simplicial complex.
    Gcw {
        /// Simplicial complex file.
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Keep simplices with stabilizers outside the family as flagged summands.
        #[arg(long)]
        permissive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated simplicial join, compared with the chain-level join.
    Joinspace {
        /// Simplicial complex file; the octahedron when omitted.
        #[arg(long, requires = "family")]
        space: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        copies: usize,
        #[arg(long, default_value = "F2")]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lowers the dimension of a complex at one object by one.
    Kill {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        object: String,
        /// Repeat at every object until dimensions equal homology dimensions.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replaces `H_k` along a map out of it.
    Modify {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        target: PathBuf,
        /// `H_k → target` in the homology basis; see `homology-basis` in the report.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Postnikov sections.
    Postnikov {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Degreewise pushout of `B ← A → C`.
    Pushout {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a registered verification suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
}

fn digest(args: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut ctx = commands::Context::new(cli.seed);
    let outcome = commands::run(&cli.command, &mut ctx);
    let mut report = json!({
        "command": argv[1..].to_vec(),
        "inputs_digest": digest(&argv[1..], &ctx.inputs),
        "seed": cli.seed,
    });
    let code = match outcome {
        Ok((results, ok)) => {
            report["results"] = results;
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
            ExitCode::from(1)
        }
    };
    if cli.timing {
        report["timing_ms"] = Value::from(start.elapsed().as_millis() as u64);
    }
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    // A closed pipe is not worth a panic.
    let _ = writeln!(std::io::stdout(), "{text}");
    code
}
