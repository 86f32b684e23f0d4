//! Eleven agents (N = 5) walked through stage two with scripted coin flips.
//!
//! Day 1 splits 5:6, so the five agents in A take ID 0 at once. The six in B
//! then split by coin flips: three move (a tie, so the movers take IDs 1..3),
//! then `a` moves alone (ID 1), then `e` (ID 2), leaving `h` with ID 3; the
//! other three repeat the process for IDs 4..6.

use camg::model::{AgentView, DayRecord, GameConfig, ScriptedDraws};
use camg::protocol::{Agent, Phase, ProtocolState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GameConfig::new(5, 0)?;
    let (a, b) = (0.25, 0.75); // below 1/2: pick A on day 1, move in stage two
    let script: [(char, Vec<f64>); 11] = [
        ('a', vec![b, a, a]),
        ('b', vec![a]),
        ('c', vec![a]),
        ('d', vec![b, b, a]),
        ('e', vec![b, a, b, a]),
        ('f', vec![b, b, b, a]),
        ('g', vec![a]),
        ('h', vec![b, a, b, b]),
        ('i', vec![b, b, b, b]),
        ('j', vec![a]),
        ('k', vec![a]),
    ];
    let mut agents: Vec<Agent<ScriptedDraws>> = script
        .iter()
        .enumerate()
        .map(|(i, (_, draws))| Agent::new(&config, AgentView::new(i, ScriptedDraws::new(draws.clone()))))
        .collect();
    let mut public = ProtocolState::new(&config);

    while !public.is_cyclic() {
        let choices: Vec<_> = agents.iter_mut().map(|ag| ag.act()).collect::<Result<_, _>>()?;
        let in_a = choices.iter().filter(|c| **c == camg::Choice::A).count() as u64;
        let record = DayRecord::new(in_a, config.n_agents() - in_a);
        public.observe(record)?;
        for ag in agents.iter_mut() {
            ag.observe(record)?;
        }
        let who: String =
            script.iter().zip(&choices).map(|((name, _), c)| format!("{name}{c}")).collect::<Vec<_>>().join(" ");
        print!("day {}: A={:<2} B={:<2} | {who} | ", public.day(), record.attendance_a, record.attendance_b);
        match public.phase() {
            Phase::StageTwo(s2) => {
                let stack: Vec<String> = s2
                    .stack
                    .iter()
                    .rev()
                    .map(|s| format!("{{{} in {}, ids {}..{}}}", s.size, s.location, s.first_id, s.last_id()))
                    .collect();
                println!("stack (top first) {}", stack.join(" "));
            }
            other => println!("{other:?}"),
        }
    }

    println!("\nassigned ids:");
    for ((name, _), ag) in script.iter().zip(&agents) {
        println!("  {name} -> {}", ag.knowledge().membership().id().expect("every agent has an id"));
    }
    Ok(())
}
