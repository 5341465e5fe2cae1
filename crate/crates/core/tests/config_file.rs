use racs_core::behavior::StrategyKind;
use racs_core::protocol::{BlacklistRule, DelayRule};
use racs_core::sim::{MaliciousStrategy, SimConfig};
use racs_core::{Error, NodeId};

#[test]
fn empty_file_is_the_desk_profile() {
    assert_eq!(SimConfig::parse("").unwrap(), SimConfig::desk());
    assert_eq!(
        SimConfig::parse("# nothing here\n\n").unwrap(),
        SimConfig::desk()
    );
}

#[test]
fn every_key_round_trips_through_text() {
    let text = "\
node_count = 40
malicious_count = 6
blacklist_rule = prose
delay_rule = pseudocode
malicious_strategy = flood
pins = 0:link_break, 5:supportive
strategy_counts = delay:2
flood_rate = 12
seed = 77
";
    let cfg = SimConfig::parse(text).unwrap();
    assert_eq!(cfg.node_count, 40);
    assert_eq!(cfg.blacklist_rule, BlacklistRule::Prose);
    assert_eq!(cfg.delay_rule, DelayRule::Pseudocode);
    assert_eq!(
        cfg.malicious_strategy,
        MaliciousStrategy::Fixed(StrategyKind::Flood)
    );
    assert_eq!(
        cfg.pins,
        vec![
            (NodeId(0), StrategyKind::LinkBreak),
            (NodeId(5), StrategyKind::Supportive)
        ]
    );
    assert_eq!(cfg.flood_rate(), 12.0);
    cfg.validate().unwrap();
    assert_eq!(SimConfig::parse(&cfg.to_text()).unwrap(), cfg);
}

#[test]
fn syntax_errors_carry_line_numbers() {
    match SimConfig::parse("node_count = 10\nthis line has no equals\n") {
        Err(Error::ConfigSyntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn semantic_errors_name_the_field() {
    match SimConfig::parse("node_count = 10\nmalicious_count = 11\n") {
        Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "malicious_count"),
        other => panic!("{other:?}"),
    }
    let swapped = SimConfig::parse("min_radio = 300\nmax_radio = 200\n");
    assert!(swapped.is_err() || swapped.unwrap().validate().is_err());
}

#[test]
fn full_scale_profile_checks_ranges() {
    let mut cfg = SimConfig::full_scale();
    cfg.validate().unwrap();
    cfg.node_count = 20_000;
    assert!(cfg.validate().is_err());
}
