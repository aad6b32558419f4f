//! Configuration files written by `to_kv` read back to the same configuration.

use proptest::prelude::*;
use verify_harness::config::{Format, RawConfig};
use verify_harness::registry::CHECKS;
use verify_harness::RunConfig;

fn run_config() -> impl Strategy<Value = RunConfig> {
    let model = prop_oneof![Just((2, 1, 1)), Just((2, 1, 2)), Just((3, 2, 1)), Just((5, 1, 1)), Just((2, 3, 1))];
    let ids = proptest::sample::subsequence(CHECKS.iter().map(|c| c.id).collect::<Vec<_>>(), 0..4);
    (model, 1u32..=4, 0u32..3, any::<u64>(), ids, 1usize..500, any::<bool>(), any::<bool>(), 1u32..4)
        .prop_map(|((p, e, f), ball, extra, seed, ids, samples, checked, json, cutoff)| {
            let mut config = RunConfig::new(p, e, f).unwrap().with_ball(ball).unwrap().with_seed(seed);
            config.prec = 2 * ball + 1 + extra;
            config = if ids.is_empty() { config } else { config.with_checks(&ids) };
            config.samples = samples;
            config.checked = checked;
            config.max_cutoff = cutoff;
            config.format = if json { Format::Json } else { Format::Text };
            config
        })
}

proptest! {
    #[test]
    fn kv_round_trip(config in run_config()) {
        let back = RawConfig::parse(&config.to_kv()).unwrap().resolve().unwrap();
        prop_assert_eq!(back, config);
    }

    #[test]
    fn flags_override_file(config in run_config(), ball in 1u32..=4, seed in any::<u64>()) {
        let flags = RawConfig { ball: Some(ball), seed: Some(seed), ..RawConfig::default() };
        let merged = RawConfig::parse(&config.to_kv()).unwrap().merge(flags);
        prop_assert_eq!(merged.ball, Some(ball));
        prop_assert_eq!(merged.seed, Some(seed));
        prop_assert_eq!(merged.p, Some(config.p));
    }
}
