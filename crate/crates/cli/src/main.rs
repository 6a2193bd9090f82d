//! `groupgames`: solve, verify and explore group games from the command line.
//!
//! Exit codes: 0 on success or a certified equilibrium, 1 when verification
//! finds a positive gap, 2 on any input error. `GROUPGAMES_THREADS` caps the
//! worker pool used by sweeps.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use groupgames::{OrderWeights, PayoffFn};
use groupgames_cli::doc::{self, emit_game, parse_nu_flag, render, GameDocument};
use groupgames_cli::{builtin, demo, load_game, load_profile, report, sweep};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "groupgames", version, about = "Exact equilibria of games on groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct NuArgs {
    /// Order weights: `uniform`, one order such as `2,1`, or weighted
    /// orders such as `1,2=1/3;2,1=2/3`. Defaults to the game's own.
    #[arg(long)]
    nu: Option<String>,
    /// Integrate the last player of each order first instead of the first.
    #[arg(long)]
    flip_order: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an equilibrium and verify it.
    Solve {
        /// Game document path or `builtin:NAME`.
        game: String,
        #[command(flatten)]
        nu: NuArgs,
    },
    /// Verify a profile; exits 1 when some player can gain by deviating.
    Verify {
        game: String,
        /// Profile document path or `builtin:NAME`; defaults to the profile
        /// embedded in the game document.
        profile: Option<String>,
        #[command(flatten)]
        nu: NuArgs,
    },
    /// Payoffs of a profile with the per-order breakdown.
    Payoff {
        game: String,
        profile: Option<String>,
        #[command(flatten)]
        nu: NuArgs,
    },
    /// Best deviation and gap for one player (numbered from 1).
    Gap {
        game: String,
        profile: String,
        player: usize,
        #[command(flatten)]
        nu: NuArgs,
    },
    /// Window sweeps as CSV.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Run a builtin demo.
    Demo {
        /// One of mp-finite, rsp-finite, mp-z, wald, rsp-q1, cones-z2,
        /// love-hate, fubini-remark.
        name: String,
    },
    /// Evaluate every integration order separately for each player.
    Fubini {
        game: String,
        profile: Option<String>,
    },
    /// Print a builtin game document, or list the builtins.
    Builtin { name: Option<String> },
}

#[derive(Subcommand)]
enum SweepKind {
    /// Window averages of a player's payoff.
    Density {
        game: String,
        #[arg(long, default_value_t = 1)]
        player: usize,
        /// Window family: z-symmetric, z-right, z-left, z2-cone, z2-square,
        /// q1-factorial, finite.
        #[arg(long)]
        window: String,
        /// Window sizes: `1,2,5` or `10..1000:10`.
        #[arg(long)]
        n: String,
        /// Cone for z2-cone windows as `u1,u2,v1,v2`; defaults to the
        /// player's own cone, else the open first quadrant.
        #[arg(long)]
        cone: Option<String>,
    },
    /// Invariance defect `|gF △ F| / |F|` along a window family.
    Defect {
        /// `Z`, `Z2`, `Q1`, `zc M`, or a path to a JSON group document.
        #[arg(long)]
        group: String,
        /// The translating element as JSON, e.g. `3`, `[1,1]`, `"1/8"`.
        #[arg(long)]
        g: String,
        #[arg(long)]
        window: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        cone: Option<String>,
    },
    /// Upper Banach density of a player's indicator payoff.
    Banach {
        game: String,
        #[arg(long, default_value_t = 1)]
        player: usize,
        #[arg(long)]
        n: String,
        /// Translate range; defaults to 10n.
        #[arg(long)]
        range: Option<u64>,
    },
}

enum Outcome {
    Done,
    NotCertified,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotCertified) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("GROUPGAMES_THREADS") {
        let k: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| anyhow!("GROUPGAMES_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    Ok(())
}

fn nu_for(doc: &GameDocument, args: &NuArgs) -> anyhow::Result<OrderWeights> {
    match &args.nu {
        Some(text) => Ok(parse_nu_flag(text, doc.game.players())?),
        None => Ok(doc.game.nu().clone()),
    }
}

fn profile_for(doc: &GameDocument, source: Option<&str>) -> anyhow::Result<groupgames::Profile> {
    match source {
        Some(s) => load_profile(doc, s),
        None => doc
            .profile
            .clone()
            .ok_or_else(|| anyhow!("no profile given and the game document embeds none")),
    }
}

fn print(v: &Value) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(render(v).as_bytes())?;
    Ok(())
}

fn player_phi(doc: &GameDocument, player: usize) -> anyhow::Result<&PayoffFn> {
    if player == 0 || player > doc.game.players() {
        bail!("player {player} is not in 1..={}", doc.game.players());
    }
    Ok(doc.game.phi(player - 1))
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Solve { game, nu } => {
            let doc = load_game(&game)?;
            let weights = nu_for(&doc, &nu)?;
            let r = report::solve(&doc.game, &weights, nu.flip_order)?;
            print(&r)?;
            Ok(certified(&r["verification"]))
        }
        Command::Verify { game, profile, nu } => {
            let doc = load_game(&game)?;
            let p = profile_for(&doc, profile.as_deref())?;
            let weights = nu_for(&doc, &nu)?;
            let r = report::verify(&doc.game, &p, &weights, nu.flip_order)?;
            print(&r)?;
            Ok(certified(&r))
        }
        Command::Payoff { game, profile, nu } => {
            let doc = load_game(&game)?;
            let p = profile_for(&doc, profile.as_deref())?;
            let weights = nu_for(&doc, &nu)?;
            print(&report::payoff(&doc.game, &p, &weights, nu.flip_order)?)?;
            Ok(Outcome::Done)
        }
        Command::Gap { game, profile, player, nu } => {
            let doc = load_game(&game)?;
            player_phi(&doc, player)?;
            let p = load_profile(&doc, &profile)?;
            let weights = nu_for(&doc, &nu)?;
            print(&report::gap(&doc.game, &p, player - 1, &weights, nu.flip_order)?)?;
            Ok(Outcome::Done)
        }
        Command::Sweep { kind } => {
            run_sweep(kind)?;
            Ok(Outcome::Done)
        }
        Command::Demo { name } => {
            let (r, ok) = demo::run(&name)?;
            print(&r)?;
            Ok(if ok { Outcome::Done } else { Outcome::NotCertified })
        }
        Command::Fubini { game, profile } => {
            let doc = load_game(&game)?;
            let p = profile_for(&doc, profile.as_deref())?;
            print(&report::fubini(&doc.game, &p)?)?;
            Ok(Outcome::Done)
        }
        Command::Builtin { name: None } => {
            print(&serde_json::json!({"games": builtin::GAMES, "profiles": builtin::PROFILES, "demos": demo::DEMOS}))?;
            Ok(Outcome::Done)
        }
        Command::Builtin { name: Some(name) } => {
            let doc = builtin::game(&name).ok_or_else(|| {
                anyhow!("unknown builtin game `{name}`; expected one of {}", builtin::GAMES.join(", "))
            })?;
            print(&emit_game(&doc))?;
            Ok(Outcome::Done)
        }
    }
}

fn certified(r: &Value) -> Outcome {
    if r["certified"] == Value::Bool(true) {
        Outcome::Done
    } else {
        Outcome::NotCertified
    }
}

fn run_sweep(kind: SweepKind) -> anyhow::Result<()> {
    let points = match kind {
        SweepKind::Density { game, player, window, n, cone } => {
            let doc = load_game(&game)?;
            let phi = player_phi(&doc, player)?;
            let cone = match (cone, phi) {
                (Some(text), _) => Some(sweep::parse_cone(&text)?),
                (None, PayoffFn::Predicate(p @ groupgames::PredicateZ2::Cone { .. })) => Some(p.clone()),
                _ => None,
            };
            let specs = sweep::windows(&window, &sweep::parse_ns(&n)?, cone.as_ref())?;
            sweep::density(doc.game.group(), phi, &specs)?
        }
        SweepKind::Defect { group, g, window, n, cone } => {
            let group = if std::path::Path::new(&group).is_file() {
                let text = std::fs::read_to_string(&group).with_context(|| format!("cannot read {group}"))?;
                doc::parse_group(&doc::parse_json(&text)?, "group")?
            } else {
                doc::parse_group(&Value::String(group), "--group")?
            };
            let raw = doc::parse_json(&g).unwrap_or(Value::String(g.clone()));
            let element = doc::parse_element(&group, &raw, "--g")?;
            let cone = cone.map(|c| sweep::parse_cone(&c)).transpose()?;
            let specs = sweep::windows(&window, &sweep::parse_ns(&n)?, cone.as_ref())?;
            sweep::defect(&group, &element, &specs)?
        }
        SweepKind::Banach { game, player, n, range } => {
            let doc = load_game(&game)?;
            let phi = player_phi(&doc, player)?;
            sweep::banach(phi, &sweep::parse_ns(&n)?, range)?
        }
    };
    sweep::write_csv(&points, std::io::stdout().lock())
}
