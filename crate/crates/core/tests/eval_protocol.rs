use mplx_core::eval::{
    downsample, export_features, run_experiment, ExperimentSpec, FeatureSet, HeuristicSpec, NetworkSource, Thresholding,
};
use mplx_core::monoplex::{HeuristicKind, HeuristicParams};
use mplx_core::synth::{ba_layer, rng_for, shuffle_labels, SynthSpec};
use mplx_core::{MultiplexNetwork, PropertyKind};

fn twins(n: usize, seed: u64) -> MultiplexNetwork {
    let mut rng = rng_for(seed, 0);
    let g = shuffle_labels(&ba_layer(n, 3, &mut rng).unwrap(), &mut rng);
    MultiplexNetwork::new(vec![g.clone(), g]).unwrap()
}

#[test]
fn twin_layers_favor_cwc() {
    let mut heuristics: Vec<HeuristicSpec> = HeuristicKind::ALL.iter().map(|&h| HeuristicSpec::mono(h)).collect();
    heuristics.push(HeuristicSpec::cwc(PropertyKind::Edge));
    let spec = ExperimentSpec {
        reps: 5,
        seed: 8,
        heuristics,
        ..Default::default()
    };
    let r = run_experiment(&NetworkSource::Fixed(twins(40, 2)), &spec).unwrap();
    for layer in 0..2 {
        let cwc = r.layer_mean("CWCe", layer).unwrap();
        for h in HeuristicKind::ALL {
            assert!(cwc > r.layer_mean(&h.to_string(), layer).unwrap(), "{h} layer {layer}");
        }
    }
}

#[test]
fn removed_edges_stay_hidden() {
    let net = twins(30, 5);
    let (obs, removed) = downsample(&net, 0.25, &mut rng_for(1, 1)).unwrap();
    for (l, gone) in removed.iter().enumerate() {
        for &j in gone {
            let (u, v) = net.pairs().pair(j).unwrap();
            assert!(net.layer(l).has_edge(u, v));
            assert!(!obs.layer(l).has_edge(u, v));
        }
        assert_eq!(obs.layer(l).edge_count() + gone.len(), net.layer(l).edge_count());
    }
}

#[test]
fn synthetic_experiment_is_reproducible() {
    let src = NetworkSource::Synthetic(SynthSpec {
        n: 40,
        k: 4,
        target_median_corr: 0.5,
        seed: 12,
        ..Default::default()
    });
    let spec = ExperimentSpec {
        reps: 3,
        seed: 4,
        thresholding: Thresholding::NumSd(2.0),
        ..Default::default()
    };
    let a = run_experiment(&src, &spec).unwrap();
    let b = run_experiment(&src, &spec).unwrap();
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert!(text.starts_with("heuristic,layer,replicate,accuracy\n"));
    assert!(text.contains("heuristic,mean_accuracy,std_error,replicates"));
    assert_eq!(a.records.len(), 3 * 4 * spec.heuristics.len());
}

#[test]
fn feature_export_is_balanced_per_layer() {
    let net = twins(20, 1);
    let fm = export_features::<f64>(&net, FeatureSet::All, &[HeuristicKind::Katz], HeuristicParams::default(), 6).unwrap();
    for layer in 0..2 {
        let pos = fm.rows.iter().filter(|r| r.layer == layer && r.label == 1).count();
        let neg = fm.rows.iter().filter(|r| r.layer == layer && r.label == 0).count();
        assert_eq!(pos, neg);
        assert_eq!(pos, net.layer(layer).edge_count());
    }
    assert_eq!(fm.feature_names.len(), 8 * 2 + 2 + 4);
}
