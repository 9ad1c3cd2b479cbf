use rinkpace::metrics::{Dimension, GroupBy};
use rinkpace::pipeline::{Analysis, AnalysisConfig, SequenceKind};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn season(seed: u64) -> (rinkpace::synth::Synthetic, Analysis) {
    let cfg = GenConfig {
        seed,
        n_games: 6,
        ..Default::default()
    };
    let s = generate(&cfg).unwrap();
    let an = Analysis::new(s.log(), RinkSpec::NHL, AnalysisConfig::default());
    (s, an)
}

#[test]
fn zonal_sums_match_ledger_exactly() {
    let (s, an) = season(11);
    let by = GroupBy::new([Dimension::Team, Dimension::Zone]);
    let agg = an.aggregate(SequenceKind::Zonal, &by, None);
    let exp = s.ledger.expected(|x| Some((x.team.clone(), x.zone)));
    let mut compared = 0;
    for (k, v) in &agg {
        if v.n_samples == 0 {
            continue;
        }
        let key = (k.team.clone().unwrap(), k.zone.unwrap());
        let e = &exp[&key];
        assert_eq!(v.n_samples, e.n, "{key:?}");
        assert_eq!(v.sum_d_total.to_bits(), e.d_total.to_bits(), "{key:?}");
        assert_eq!(v.sum_d_ew.to_bits(), e.d_ew.to_bits());
        assert_eq!(v.sum_d_ns.to_bits(), e.d_ns.to_bits());
        assert_eq!(v.sum_d_n.to_bits(), e.d_n.to_bits());
        assert_eq!(v.sum_dt.to_bits(), e.dt.to_bits());
        compared += 1;
    }
    assert_eq!(compared, exp.len());
}

#[test]
fn standard_sums_and_sequence_count_match_ledger() {
    let (s, an) = season(12);
    let by = GroupBy::new([Dimension::Team]);
    let agg = an.aggregate(SequenceKind::Standard, &by, None);
    let exp = s.ledger.expected(|x| Some(x.team.clone()));
    for (team, e) in &exp {
        let v = agg.iter().find(|(k, _)| k.team.as_deref() == Some(team)).unwrap().1;
        assert_eq!(v.n_samples, e.n);
        assert_eq!(v.sum_d_total.to_bits(), e.d_total.to_bits());
        assert_eq!(v.sum_dt.to_bits(), e.dt.to_bits());
    }
    assert_eq!(an.sequences(SequenceKind::Standard).len(), s.ledger.possessions);
}
