//! The questioner's strategy: which question to ask in every reachable state.

pub mod formulas;
pub mod phantom;
pub mod search;
pub mod tables;
pub mod tiny;

use std::fmt;

use crate::error::{Error, Result};
use crate::niceness::{dp_qtype, in_w_tilde, is_0typical};
use crate::question::Question;
use crate::state::{binom, character, Answer, GameState, QuestionType, StateType};
use crate::synthesis::{
    synth_endgame, synth_theorem1, synth_type_0bcd, synth_type_100d, synth_type_102d, synth_type_11cd,
    synthesize,
};

pub use formulas::{guzicki_qtype, lemma7_sequence, spencer_qtype, type_103n};
pub use phantom::Shadow;
pub use tables::{lookup, table_strategy, Lemma, TableRow, TABLE_MS};
pub use tiny::{minimax_tiny, tiny_depth};

/// Which question family the dispatcher uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Scripts, closed forms and the DP, aiming at the information-theoretic bound.
    #[default]
    Perfect,
    /// Balanced halving with the level-3 count from the volume balance.
    Spencer,
    /// The perfect rules exactly as printed, without the oracle check and search.
    Printed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Perfect => "perfect",
            Mode::Spencer => "spencer",
            Mode::Printed => "printed",
        })
    }
}

/// The rule that produced a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Tiny,
    Endgame,
    Halving,
    Table(Lemma),
    ThreeStep,
    Type103n,
    Guzicki,
    Dp,
    Spencer,
    Search,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Table(l) => write!(f, "table/{l:?}"),
            r => write!(f, "{r:?}"),
        }
    }
}

/// Whether `t` is `f·(1, j, C(j,2), C(j,3))` with `f ≥ 2` a power of two.
pub fn is_halving_type(t: StateType) -> bool {
    let [f, t1, t2, t3] = t.0;
    if f < 2 || !f.is_power_of_two() || t1 % f != 0 {
        return false;
    }
    let j = t1 / f;
    t2 == binom(j, 2) as u64 * f && t3 == binom(j, 3) as u64 * f
}

fn synth_by(lemma: Lemma, state: &GameState, qt: QuestionType) -> Result<Question> {
    let s = match lemma {
        Lemma::Theorem1 => synth_theorem1(state, qt)?,
        Lemma::Type11cd => synth_type_11cd(state, qt)?,
        Lemma::Type102d => synth_type_102d(state, qt)?,
        Lemma::Type100d => synth_type_100d(state, qt)?,
        Lemma::Type0bcd => synth_type_0bcd(state, qt)?,
        Lemma::Straightforward => synthesize(state, qt)?,
    };
    Ok(s.question)
}

/// Question for a plain state, or `None` when it is final. Post-halving states that need
/// padding are reported as [`Error::NoStrategy`]; [`Node`] handles those.
///
/// In perfect mode a rule whose children are not both nice, or a rule that fails, is
/// replaced by a searched question when the state is small enough for the oracle.
pub fn dispatch(state: &GameState, mode: Mode) -> Result<Option<(Question, Rule)>> {
    let ruled = printed(state, mode);
    if mode != Mode::Perfect {
        return ruled;
    }
    let t = state.state_type();
    match &ruled {
        Ok(None) => return ruled,
        Ok(Some((_, Rule::Tiny | Rule::Endgame | Rule::Halving))) => return ruled,
        Ok(Some((q, _))) if search::sound(state, q) => return ruled,
        Err(Error::NoStrategy(_)) if phantom::post_halving_m(t).is_some_and(|m| phantom::covering_m(m, &TABLE_MS).is_some()) => {
            return ruled
        }
        _ => {}
    }
    if character(t) > search::SEARCH_CHARACTER {
        return ruled;
    }
    match search::searched_question(state) {
        Ok(q) => Ok(Some((q, Rule::Search))),
        Err(_) => ruled,
    }
}

fn printed(state: &GameState, mode: Mode) -> Result<Option<(Question, Rule)>> {
    let t = state.state_type();
    let [t0, t1, t2, _] = t.0;
    if t.support() <= 1 {
        return Ok(None);
    }
    if t.support() <= tiny::TINY_SUPPORT {
        return Ok(Some((minimax_tiny(state)?, Rule::Tiny)));
    }
    if t0 + t1 + t2 <= 1 {
        return Ok(Some((synth_endgame(state)?, Rule::Endgame)));
    }
    let ch = character(t);
    if mode == Mode::Spencer {
        let (qt, _) = spencer_qtype(t, ch - 1)?;
        return Ok(Some((synthesize(state, qt)?.question, Rule::Spencer)));
    }
    if is_halving_type(t) {
        let qt = QuestionType(t.0.map(|x| x / 2));
        return Ok(Some((synth_theorem1(state, qt)?.question, Rule::Halving)));
    }
    if let Some(row) = lookup(t) {
        return Ok(Some((synth_by(row.lemma, state, row.question)?, Rule::Table(row.lemma))));
    }
    if t0 == 1 {
        if let Some(m) = phantom::post_halving_m(t) {
            if m >= 33 {
                let qt = formulas::plan_q1(t, ch - 2)?;
                return Ok(Some((synth_theorem1(state, qt)?.question, Rule::ThreeStep)));
            }
            return Err(Error::NoStrategy(t));
        }
        if t1 == 0 && t2 == 3 && t.0[3] >= 7 {
            let qt = type_103n(t)?;
            return Ok(Some((synth_type_100d(state, qt)?.question, Rule::Type103n)));
        }
        // the second and third questions of the three-question plan
        if t1 == 1 {
            let qt = formulas::plan_q3(t, ch)?;
            return Ok(Some((synth_type_102d(state, qt)?.question, Rule::ThreeStep)));
        }
        let qt = formulas::plan_q2(t, ch - 1)?;
        return Ok(Some((synth_type_11cd(state, qt)?.question, Rule::ThreeStep)));
    }
    if t0 == 0 {
        if is_0typical(t) && ch >= 12 {
            match guzicki_qtype(t) {
                Ok(qt) => return Ok(Some((synth_type_0bcd(state, qt)?.question, Rule::Guzicki))),
                Err(e) if !in_w_tilde(t) => return Err(e),
                Err(_) => {}
            }
        }
        if in_w_tilde(t) {
            let qt = dp_qtype(t)?;
            return Ok(Some((synth_type_0bcd(state, qt)?.question, Rule::Dp)));
        }
    }
    Err(Error::NoStrategy(t))
}

/// A position of the game, possibly played inside a padded copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub real: GameState,
    pub shadow: Option<Shadow>,
}

/// A chosen question with what is needed to advance the node.
#[derive(Debug, Clone)]
pub struct Step {
    pub question: Question,
    pub rule: Rule,
    /// The padded copy in force for this question and the question asked there.
    pub shadow: Option<(Shadow, Question)>,
}

/// Signature that determines every later decision: the support levels in rank order,
/// plus, when padded, the padded levels with a real/phantom flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeKey {
    pub real: Vec<(u8, u64)>,
    pub shadow: Option<Vec<(u8, bool, u64)>>,
}

fn support_signature(state: &GameState) -> Vec<(u8, u64)> {
    let mut out: Vec<(u8, u64)> = Vec::new();
    for r in state.support_runs() {
        match out.last_mut() {
            Some(last) if last.0 == r.level => last.1 += r.len(),
            _ => out.push((r.level, r.len())),
        }
    }
    out
}

impl Node {
    pub fn new(state: GameState) -> Node {
        Node { real: state, shadow: None }
    }

    pub fn initial(m: u32) -> Node {
        Node::new(GameState::initial(m))
    }

    pub fn is_final(&self) -> bool {
        self.real.is_final()
    }

    /// The state the strategy reasons about.
    pub fn working(&self) -> &GameState {
        self.shadow.as_ref().map_or(&self.real, |s| &s.state)
    }

    pub fn key(&self) -> NodeKey {
        let shadow = self.shadow.as_ref().map(|sh| {
            let mut out: Vec<(u8, bool, u64)> = Vec::new();
            let mut real_labels = self.real.support_runs().flat_map(|r| {
                let map = sh.map.clone();
                (r.lo..=r.hi).map(move |x| map.image(x))
            });
            let mut next_real = real_labels.next();
            for r in sh.state.support_runs() {
                for x in r.lo..=r.hi {
                    let is_real = next_real == Some(x);
                    if is_real {
                        next_real = real_labels.next();
                    }
                    match out.last_mut() {
                        Some(last) if last.0 == r.level && last.1 == is_real => last.2 += 1,
                        _ => out.push((r.level, is_real, 1)),
                    }
                }
            }
            out
        });
        NodeKey { real: support_signature(&self.real), shadow }
    }

    /// The next question, or `None` at a final state.
    pub fn step(&self, mode: Mode) -> Result<Option<Step>> {
        if self.is_final() {
            return Ok(None);
        }
        // small real states are played exactly, without the padding
        if self.real.support_size() <= tiny::TINY_SUPPORT {
            return Ok(Some(Step { question: minimax_tiny(&self.real)?, rule: Rule::Tiny, shadow: None }));
        }
        let shadow = match &self.shadow {
            Some(s) => Some(s.clone()),
            None if mode != Mode::Spencer => self.padding()?,
            None => None,
        };
        match shadow {
            None => Ok(dispatch(&self.real, mode)?.map(|(question, rule)| Step { question, rule, shadow: None })),
            Some(sh) => {
                let (sq, rule) = dispatch(&sh.state, mode)?
                    .ok_or_else(|| Error::Internal("padded state is final while the real one is not".into()))?;
                let question = sh.map.pull_back(&sq)?;
                Ok(Some(Step { question, rule, shadow: Some((sh, sq)) }))
            }
        }
    }

    fn padding(&self) -> Result<Option<Shadow>> {
        let t = self.real.state_type();
        let Some(m) = phantom::post_halving_m(t) else { return Ok(None) };
        if TABLE_MS.contains(&m) || m >= 33 {
            return Ok(None);
        }
        match phantom::covering_m(m, &TABLE_MS) {
            Some(target) => Ok(Some(phantom::embed(&self.real, target)?)),
            None => Ok(None),
        }
    }

    pub fn child(&self, step: &Step, answer: Answer) -> Result<Node> {
        let real = self.real.apply_answer(&step.question, answer)?;
        let shadow = match &step.shadow {
            Some((sh, sq)) => Some(Shadow { state: sh.state.apply_answer(sq, answer)?, map: sh.map.clone() }),
            None => None,
        };
        Ok(Node { real, shadow })
    }
}

/// Question for `state` in perfect mode, `None` if the state is final.
pub fn next_question(state: &GameState) -> Result<Option<Question>> {
    Ok(Node::new(state.clone()).step(Mode::Perfect)?.map(|s| s.question))
}

/// One ply of a played game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ply {
    pub depth: usize,
    pub before: StateType,
    pub question: Question,
    pub rule: Rule,
    pub answer: Answer,
    pub after: StateType,
    /// Padded state types before and after, when the game runs inside a padded copy.
    pub padded: Option<(StateType, StateType)>,
}

impl fmt::Display for Ply {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.depth,
            self.before,
            self.question,
            self.answer.as_char(),
            self.after
        )
    }
}

/// Plays the strategy from the initial state against a fixed answer sequence.
/// Stops at a final state or when the answers run out.
pub fn trace(m: u32, answers: &[Answer], mode: Mode) -> Result<(Vec<Ply>, Node)> {
    let mut node = Node::initial(m);
    let mut plies = Vec::new();
    for (depth, &answer) in answers.iter().enumerate() {
        let Some(step) = node.step(mode)? else { break };
        let next = node.child(&step, answer)?;
        plies.push(Ply {
            depth,
            before: node.real.state_type(),
            question: step.question.clone(),
            rule: step.rule,
            answer,
            after: next.real.state_type(),
            padded: step
                .shadow
                .as_ref()
                .map(|(sh, _)| (sh.state.state_type(), next.working().state_type())),
        });
        node = next;
    }
    Ok((plies, node))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::question::question_type;
    use crate::shape::template_state;
    use crate::shape::Pattern;

    #[test]
    fn halving_first_question() {
        let s = GameState::initial(4);
        let q = next_question(&s).unwrap().unwrap();
        assert_eq!(question_type(&s, &q), QuestionType([8, 0, 0, 0]));
    }

    #[test]
    fn halving_types() {
        assert!(is_halving_type(StateType([16, 0, 0, 0])));
        assert!(is_halving_type(StateType([4, 8, 4, 0])));
        assert!(!is_halving_type(StateType([1, 4, 6, 4])));
        assert!(!is_halving_type(StateType([3, 0, 0, 0])));
    }

    fn reach(m: u32, target: StateType) -> Node {
        let mut node = Node::initial(m);
        while node.real.state_type() != target {
            let step = node.step(Mode::Perfect).unwrap().unwrap();
            node = node.child(&step, Answer::Yes).unwrap();
        }
        node
    }

    #[test]
    fn table_row_for_m8() {
        let node = reach(8, StateType([1, 8, 28, 56]));
        let step = node.step(Mode::Perfect).unwrap().unwrap();
        assert_eq!(step.rule, Rule::Table(Lemma::Theorem1));
        assert_eq!(question_type(&node.real, &step.question), QuestionType([1, 4, 10, 22]));
    }

    #[test]
    fn non_nice_state_is_rejected() {
        // a well-shaped state of type (0,2,2,6)
        let mut sizes = [0u64; 12];
        let names = Pattern::Sigma1.names();
        let mut want = [0u64, 2, 2, 6];
        for (i, n) in names.iter().enumerate() {
            let l = n.level() as usize;
            if want[l] > 0 {
                sizes[i] = 1.min(want[l]);
                want[l] -= sizes[i];
            }
        }
        sizes[names.iter().position(|n| n.level() == 3).unwrap()] += want[3];
        let s = template_state(5, Pattern::Sigma1, sizes).unwrap();
        assert_eq!(s.state_type(), StateType([0, 2, 2, 6]));
        assert_eq!(next_question(&s), Err(Error::NoStrategy(StateType([0, 2, 2, 6]))));
    }

    #[test]
    fn padded_play_uses_the_m8_script() {
        let node = reach(6, StateType([1, 6, 15, 20]));
        let step = node.step(Mode::Perfect).unwrap().unwrap();
        assert_eq!(step.rule, Rule::Table(Lemma::Theorem1));
        let (sh, sq) = step.shadow.clone().unwrap();
        assert_eq!(question_type(&sh.state, &sq), QuestionType([1, 4, 10, 22]));
        let child = node.child(&step, Answer::No).unwrap();
        assert!(child.shadow.is_some());
        assert!(child.real.state_type().dominated_by(&child.working().state_type()));
    }

    #[test]
    fn defective_m8_row_is_replaced_by_search() {
        let answers: Vec<Answer> =
            "yyynnnnnyy".chars().map(|c| if c == 'y' { Answer::Yes } else { Answer::No }).collect();
        let (perfect, _) = trace(8, &answers, Mode::Perfect).unwrap();
        let (printed, _) = trace(8, &answers, Mode::Printed).unwrap();
        assert_eq!(perfect[9].before, StateType([1, 4, 14, 40]));
        assert_eq!(perfect[9].rule, Rule::Search);
        assert_eq!(printed[9].rule, Rule::Table(Lemma::Type11cd));
        for p in [&perfect[9], &printed[9]] {
            assert!(p.question.len() <= 4);
        }
    }

    #[test]
    fn spencer_mode_halves_then_stalls() {
        let (plies, _) = trace(6, &[Answer::Yes; 6], Mode::Spencer).unwrap();
        assert_eq!(plies.len(), 6);
        assert!(plies.iter().all(|p| p.rule == Rule::Spencer));
        let t = StateType([1, 6, 15, 20]);
        assert_eq!(plies[5].after, t);
        assert_eq!(trace(6, &[Answer::Yes; 7], Mode::Spencer), Err(Error::SpencerInfeasible(t)));
    }
}
