//! Command-line arguments. Every command is serialisable so a run can be
//! echoed as JSON and repeated with `rerun`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use percduel::board::OriginPolicy;
use percduel::{Bias, LatticeBox, Variant, Vertex};

pub const SEED_ENV: &str = "PERCDUEL_SEED";
pub const DEFAULT_BIND: &str = "127.0.0.1:8642";

#[derive(Parser, Debug)]
#[command(name = "percduel", version, about = "Maker-Breaker percolation games on the square lattice")]
pub struct Cli {
    /// Write the resolved configuration here instead of to stderr.
    #[arg(long, global = true)]
    pub echo: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Check a lemma or run a strategy suite; exit code 0 iff it passes.
    Verify(VerifyArgs),
    /// Play one game and print its summary.
    Play(PlayArgs),
    /// Play seeded games and summarise outcomes.
    Batch(BatchArgs),
    /// Sample a polluted board, or regenerate one from a board file header.
    SampleBoard(SampleArgs),
    /// Serve the JSON game API.
    Serve(ServeArgs),
    /// Run again from a configuration echo.
    Rerun(RerunArgs),
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct GameArgs {
    /// unlimited, box_limited or limited.
    #[arg(long, default_value = "limited")]
    pub variant: String,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Defaults to 2m − s.
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub c: u32,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// Breaker strategy id.
    #[arg(long, default_value = "strategy4")]
    pub strategy: String,
    /// Maker policy, e.g. `random`, `greedy:3`, `banking:{seed}:0,2`. A bare
    /// kind gets the game seed appended; `{seed}` is replaced by it.
    #[arg(long, default_value = "random")]
    pub maker: String,
    /// `x,y`; on polluted boards defaults to the origin policy's pick.
    #[arg(long, allow_hyphen_values = true)]
    pub origin: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub rounds: u32,
    /// Board file to play on.
    #[arg(long, conflicts_with = "p")]
    pub board: Option<PathBuf>,
    /// Sample a polluted board with this p.
    #[arg(long)]
    pub p: Option<f64>,
    /// Sampling window `xmin,ymin,xmax,ymax`.
    #[arg(long, default_value = "-50,-50,50,50", allow_hyphen_values = true)]
    pub window: String,
    /// scan_adversarial or largest_cluster.
    #[arg(long, default_value = "scan_adversarial")]
    pub origin_policy: String,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PlayArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// Defaults to $PERCDUEL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the transcript here (and a sampled board next to it).
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BatchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// Seed of the first game; game i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub games: u64,
    /// Directory for per-game transcripts, boards and the summary.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct VerifyArgs {
    /// perimetric, bounding-box, box-connected, pairing or survival.
    #[arg(long, conflicts_with = "strategy")]
    pub lemma: Option<String>,
    /// strategy3, strategy4, strategy4-awful-first or strategy5.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, default_value_t = 7)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 20)]
    pub shuffles: usize,
    #[arg(long, default_value_t = 20)]
    pub radius: i32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub c: u32,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// Breaker bias for the survival search.
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    /// Rounds for the survival search.
    #[arg(long, default_value_t = 5)]
    pub rounds: u32,
    #[arg(long, default_value_t = percduel::survival::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Games per suite (boards for strategy5).
    #[arg(long)]
    pub games: Option<u64>,
    /// Play only this Maker kind instead of the default suite.
    #[arg(long)]
    pub maker: Option<String>,
    #[arg(long, default_value_t = 0.55)]
    pub p: f64,
    #[arg(long, default_value = "-50,-50,50,50", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SampleArgs {
    #[arg(long, default_value = "-50,-50,50,50", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, default_value_t = 0.55)]
    pub p: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Take window, p and seed from this board file's first line.
    #[arg(long)]
    pub from_header: Option<PathBuf>,
    /// Write the board here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ServeArgs {
    #[arg(long, default_value = DEFAULT_BIND)]
    pub bind: String,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RerunArgs {
    pub config: PathBuf,
}

/// `$PERCDUEL_SEED` when set and valid, else 0.
pub fn default_seed() -> Result<u64, String> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| format!("{SEED_ENV}={s:?} is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

impl Command {
    /// Fills in seeds from the environment so the echo alone reproduces the run.
    pub fn resolve(&mut self) -> Result<(), String> {
        let seed = match self {
            Command::Play(a) => &mut a.seed,
            Command::Batch(a) => &mut a.seed,
            Command::Verify(a) => &mut a.seed,
            Command::SampleBoard(a) => &mut a.seed,
            Command::Serve(_) | Command::Rerun(_) => return Ok(()),
        };
        if seed.is_none() {
            *seed = Some(default_seed()?);
        }
        Ok(())
    }
}

pub fn parse_window(s: &str) -> Result<LatticeBox, String> {
    let v: Vec<i32> = s
        .split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|_| format!("bad window {s:?}; expected xmin,ymin,xmax,ymax")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [xmin, ymin, xmax, ymax] => LatticeBox::new(xmin, xmax, ymin, ymax).map_err(|e| e.to_string()),
        _ => Err(format!("bad window {s:?}; expected xmin,ymin,xmax,ymax")),
    }
}

pub fn parse_vertex(s: &str) -> Result<Vertex, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("bad vertex {s:?}; expected x,y"))?;
    let n = |t: &str| t.trim().parse::<i32>().map_err(|_| format!("bad vertex {s:?}"));
    Ok(Vertex::new(n(x)?, n(y)?))
}

impl GameArgs {
    pub fn variant(&self) -> Result<Variant, String> {
        self.variant.parse()
    }

    pub fn bias(&self) -> Result<Bias, String> {
        let b = match self.b {
            Some(b) => b,
            None => (2 * self.m).checked_sub(self.s).ok_or_else(|| format!("s = {} exceeds 2m", self.s))?,
        };
        Bias::new(self.m, b, self.c, self.s).map_err(|e| e.to_string())
    }

    pub fn policy(&self) -> Result<OriginPolicy, String> {
        self.origin_policy.parse()
    }

    /// Maker spec for a game with this seed.
    pub fn maker_spec(&self, seed: u64) -> String {
        if self.maker.contains("{seed}") {
            self.maker.replace("{seed}", &seed.to_string())
        } else if self.maker.contains(':') {
            self.maker.clone()
        } else {
            format!("{}:{seed}", self.maker)
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        self.variant()?;
        self.bias()?;
        self.policy()?;
        parse_window(&self.window)?;
        if let Some(o) = &self.origin {
            parse_vertex(o)?;
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("p = {p} outside [0,1]"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maker_specs() {
        let mut g = Cli::parse_from(["percduel", "play"]);
        let Command::Play(a) = &mut g.command else { panic!() };
        assert_eq!(a.game.maker_spec(4), "random:4");
        a.game.maker = "banking:{seed}:0,2".into();
        assert_eq!(a.game.maker_spec(4), "banking:4:0,2");
        a.game.maker = "greedy:9".into();
        assert_eq!(a.game.maker_spec(4), "greedy:9");
    }

    #[test]
    fn windows_and_bias() {
        assert_eq!(parse_window("-2,-1,3,4").unwrap(), LatticeBox::new(-2, 3, -1, 4).unwrap());
        assert!(parse_window("1,2,3").is_err());
        let g = Cli::parse_from(["percduel", "play", "--m", "29", "--s", "1", "--window", "-3,-3,3,3", "--origin", "-1,0"]);
        let Command::Play(a) = g.command else { panic!() };
        assert_eq!(a.game.bias().unwrap().b, 57);
        assert_eq!(a.game.window, "-3,-3,3,3");
        assert_eq!(a.game.origin.as_deref(), Some("-1,0"));
    }

    #[test]
    fn echo_round_trips() {
        let mut cmd = Cli::parse_from(["percduel", "batch", "--games", "3", "--p", "0.5", "--seed", "8"]).command;
        cmd.resolve().unwrap();
        let text = serde_json::to_string(&cmd).unwrap();
        assert_eq!(serde_json::from_str::<Command>(&text).unwrap(), cmd);
    }
}
