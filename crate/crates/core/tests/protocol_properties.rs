use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

use camg::model::{ids_are_complete, AgentView, Choice, DayRecord, GameConfig, PublicTranscript};
use camg::protocol::{cyclic_attendance_a, replay_protocol_state, Agent, Knowledge, Phase};
use camg::sim::{
    agent_rng, protocol_streams, run_episode, run_episode_with, run_monte_carlo, EpisodeOptions, PROTOCOL_DOMAIN,
};
use camg::ProtocolError;

fn lone_replay(config: &GameConfig, index: usize, rng: ChaCha8Rng, transcript: &PublicTranscript) -> Vec<Choice> {
    let mut agent = Agent::new(config, AgentView::new(index, rng));
    for record in transcript.days() {
        agent.act().unwrap();
        agent.observe(*record).unwrap();
    }
    agent.view().own_choices().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn replay_is_deterministic(n in 1u64..=15, seed in any::<u64>(), trial in 0u64..1000) {
        let config = GameConfig::new(n, seed).unwrap();
        let ep = run_episode(&config, trial).unwrap();
        let a = replay_protocol_state(&ep.transcript, &config).unwrap();
        let b = replay_protocol_state(&ep.transcript, &config).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.is_cyclic());
        prop_assert_eq!(a.stage_two_days(), Some(ep.stage_two_days));
        // the same seed gives the same episode
        prop_assert_eq!(run_episode(&config, trial).unwrap(), ep);
    }

    #[test]
    fn every_agent_reaches_the_same_state(n in 1u64..=15, seed in any::<u64>()) {
        let config = GameConfig::new(n, seed).unwrap();
        let ep = run_episode(&config, 0).unwrap();
        let public = replay_protocol_state(&ep.transcript, &config).unwrap();
        for own in &ep.choices {
            let k = Knowledge::replay(&config, &ep.transcript, own).unwrap();
            prop_assert_eq!(k.public(), &public);
        }
    }

    #[test]
    fn ids_form_a_valid_assignment(n in 1u64..=20, seed in any::<u64>()) {
        let config = GameConfig::new(n, seed).unwrap();
        let ep = run_episode(&config, 3).unwrap();
        prop_assert!(ids_are_complete(&ep.ids, n));
        let zeros = ep.ids.iter().filter(|id| id.value() == 0).count() as u64;
        prop_assert_eq!(zeros, n);
        // stage one ends in an exact (N, N+1) split
        let end = ep.transcript.day(ep.stage_one_days).unwrap();
        prop_assert_eq!(end.attendance_a.min(end.attendance_b), n);
    }

    #[test]
    fn choices_depend_only_on_own_stream_and_transcript(
        n in 1u64..=12,
        seed in any::<u64>(),
        other_seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let config = GameConfig::new(n, seed).unwrap();
        let i = pick.index(config.n_agents() as usize);
        let ep = run_episode(&config, 0).unwrap();
        let stream = protocol_streams(&config, 0).swap_remove(i);

        // relabelling the agent changes nothing
        prop_assert_eq!(&lone_replay(&config, i + 17, stream.clone(), &ep.transcript), &ep.choices[i]);

        // everyone else's private randomness changes; agent i still reacts to
        // the (new) transcript exactly as a function of its own stream
        let mut streams: Vec<_> = (0..config.n_agents())
            .map(|j| agent_rng(other_seed, PROTOCOL_DOMAIN, 0, j))
            .collect();
        streams[i] = stream.clone();
        let mutated = run_episode_with(&config, streams, EpisodeOptions::for_config(&config)).unwrap();
        prop_assert_eq!(&lone_replay(&config, i, stream, &mutated.transcript), &mutated.choices[i]);
    }

    #[test]
    fn transcripts_round_trip(n in 1u64..=10, seed in any::<u64>()) {
        let config = GameConfig::new(n, seed).unwrap();
        let ep = run_episode(&config, 1).unwrap();
        let mut buf = Vec::new();
        ep.transcript.write_csv(&mut buf).unwrap();
        prop_assert_eq!(&PublicTranscript::read_csv(buf.as_slice()).unwrap(), &ep.transcript);
        let json = ep.transcript.to_json().unwrap();
        prop_assert_eq!(&PublicTranscript::from_json(&json).unwrap(), &ep.transcript);
    }
}

#[test]
fn tampered_transcript_is_a_deviation() {
    let config = GameConfig::new(4, 8).unwrap();
    let ep = run_episode(&config, 0).unwrap();
    let mut days = ep.transcript.days().to_vec();
    // continue into the cyclic phase with an off-schedule day
    let state = replay_protocol_state(&ep.transcript, &config).unwrap();
    let Phase::Cyclic { .. } = state.phase() else { panic!("episode ends in the cyclic phase") };
    let offset = state.next_cyclic_offset().unwrap();
    let a = 9 - cyclic_attendance_a(offset, 4);
    days.push(DayRecord::new(a, 9 - a));
    let err = replay_protocol_state(&PublicTranscript::from_days(days), &config).unwrap_err();
    assert!(matches!(err, ProtocolError::Deviation { .. }), "{err:?}");
}

#[test]
fn monte_carlo_is_independent_of_thread_count() {
    let config = GameConfig::new(5, 123).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_monte_carlo(&config, 2000).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}
