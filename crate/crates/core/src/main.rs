use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ulam4::niceness::non_nice_table;
use ulam4::question::question_type;
use ulam4::shape::{is_well_shaped, state_from_pairs};
use ulam4::state::{character, n_min, volume};
use ulam4::strategy::{trace, Mode, Node};
use ulam4::synthesis::synthesize;
use ulam4::verify::{verify_perfect, VerifyOptions};
use ulam4::{Answer, Error, QuestionType, StateType};

#[derive(Parser)]
#[command(name = "ulam4", version, about = "Searching with three lies and 4-interval questions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Perfect,
    Spencer,
    Printed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Perfect => Mode::Perfect,
            ModeArg::Spencer => Mode::Spencer,
            ModeArg::Printed => Mode::Printed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every answer sequence from the initial state of 2^m labels.
    Verify {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "perfect")]
        mode: ModeArg,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        no_shape_check: bool,
        /// Explore subtrees above this depth in parallel.
        #[arg(long, default_value_t = 4)]
        parallel_depth: usize,
    },
    /// Character of a state type such as "(1,8,28,56)", or n_min for --m.
    Character {
        state: Option<String>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Build a question of a given type for a state laid out as "level:len,...".
    Synth {
        #[arg(long)]
        arcs: String,
        #[arg(long)]
        target: String,
        /// Universe bit-width.
        #[arg(long, default_value_t = 12)]
        m: u32,
    },
    /// 0-typical states outside the nice region, as TSV.
    Table {
        #[arg(long, default_value_t = 11)]
        max_ch: u64,
    },
    /// Play the strategy against a fixed answer string such as "yynny".
    Trace {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        answers: String,
        #[arg(long, value_enum, default_value = "perfect")]
        mode: ModeArg,
        /// Also print the rule and the padded state types.
        #[arg(long)]
        verbose: bool,
    },
    /// Play interactively (answers y/n on stdin) or against a random liar with --seed.
    Play {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_answers(s: &str) -> Result<Vec<Answer>, Error> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'y' | 'Y' => Ok(Answer::Yes),
            'n' | 'N' => Ok(Answer::No),
            _ => Err(Error::Parse(format!("answer {c:?} is not y or n"))),
        })
        .collect()
}

fn parse_arcs(s: &str) -> Result<Vec<(u8, u64)>, Error> {
    s.split(',')
        .map(|p| {
            let (l, n) = p.trim().split_once(':').ok_or_else(|| Error::Parse(format!("{p:?} is not level:len")))?;
            let l: u8 = l.parse().map_err(|e| Error::Parse(format!("{p:?}: {e}")))?;
            let n: u64 = n.parse().map_err(|e| Error::Parse(format!("{p:?}: {e}")))?;
            Ok((l, n))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { m, mode, jobs, no_shape_check, parallel_depth } => {
            if m >= 40 {
                return usage("m must be below 40");
            }
            if let Some(j) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
                    return usage(e);
                }
            }
            let opts = VerifyOptions {
                mode: mode.into(),
                check_shape: !no_shape_check,
                parallel_depth,
                ..VerifyOptions::default()
            };
            let report = verify_perfect(m, &opts);
            print!("{report}");
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Character { state, m } => {
            if let Some(m) = m {
                println!("n_min\t{}", n_min(m));
            }
            if let Some(s) = state {
                match s.parse::<StateType>() {
                    Ok(t) => {
                        let ch = character(t);
                        println!("character\t{ch}");
                        println!("volume\t{}", volume(t, ch));
                    }
                    Err(e) => return usage(e),
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Synth { arcs, target, m } => {
            let state = match parse_arcs(&arcs).and_then(|p| state_from_pairs(m, &p)) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let target: QuestionType = match target.parse() {
                Ok(t) => t,
                Err(e) => return usage(e),
            };
            match synthesize(&state, target) {
                Ok(s) => {
                    let (y, n) = (
                        state.apply_answer(&s.question, Answer::Yes).expect("in range"),
                        state.apply_answer(&s.question, Answer::No).expect("in range"),
                    );
                    println!("question\t{}", s.question);
                    println!("type\t{}", question_type(&state, &s.question));
                    println!("complemented\t{}", s.complemented);
                    println!("yes\t{}\t{}", y.state_type(), if is_well_shaped(&y) { "well-shaped" } else { "not well-shaped" });
                    println!("no\t{}\t{}", n.state_type(), if is_well_shaped(&n) { "well-shaped" } else { "not well-shaped" });
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Table { max_ch } => {
            if max_ch > 13 {
                return usage("tables are available up to character 13");
            }
            println!("ch\tt0\tt1\tt2\tt3_min\tt3_max");
            for r in non_nice_table(max_ch) {
                println!("{}\t0\t{}\t{}\t{}\t{}", r.character, r.t1, r.t2, r.t3_min, r.t3_max);
            }
            ExitCode::SUCCESS
        }
        Cmd::Trace { m, answers, mode, verbose } => {
            let answers = match parse_answers(&answers) {
                Ok(a) => a,
                Err(e) => return usage(e),
            };
            match trace(m, &answers, mode.into()) {
                Ok((plies, node)) => {
                    for p in plies {
                        if verbose {
                            let pad = p.padded.map_or(String::new(), |(a, b)| format!("\t{a}\t{b}"));
                            println!("{p}\t{}{pad}", p.rule);
                        } else {
                            println!("{p}");
                        }
                    }
                    if node.is_final() {
                        println!("final\t{}", node.real.state_type());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Play { m, seed } => play(m, seed),
    }
}

/// Runs one game. With a seed, a responder picks a secret and lies at most three times.
fn play(m: u32, seed: Option<u64>) -> ExitCode {
    let mut node = Node::initial(m);
    let mut rng = seed.map(StdRng::seed_from_u64);
    let secret = rng.as_mut().map(|r| r.gen_range(0..1u64 << m));
    let mut lies_left = 3;
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut depth = 0;
    loop {
        let step = match node.step(Mode::Perfect) {
            Ok(Some(s)) => s,
            Ok(None) => break,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
        println!("{depth}\t{}\t{}?", node.real.state_type(), step.question);
        let answer = match (&mut rng, secret) {
            (Some(r), Some(x)) => {
                let truth = if step.question.contains(x) { Answer::Yes } else { Answer::No };
                if lies_left > 0 && r.gen_bool(0.2) {
                    lies_left -= 1;
                    truth.flip()
                } else {
                    truth
                }
            }
            _ => {
                let _ = io::stdout().flush();
                match lines.next() {
                    Some(Ok(l)) => match parse_answers(&l).ok().and_then(|a| a.first().copied()) {
                        Some(a) => a,
                        None => return usage(format!("{l:?} is not y or n")),
                    },
                    _ => return usage("input ended before the game finished"),
                }
            }
        };
        println!("{depth}\tanswer\t{}", answer.as_char());
        node = match node.child(&step, answer) {
            Ok(n) => n,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
        depth += 1;
    }
    let found = node.real.support_runs().next().map(|r| r.lo);
    match found {
        Some(x) => println!("secret\t{x}\tquestions\t{depth}"),
        None => println!("inconsistent answers\tquestions\t{depth}"),
    }
    if let (Some(s), Some(x)) = (secret, found) {
        if s != x {
            eprintln!("error: found {x}, secret was {s}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
