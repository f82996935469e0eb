use proptest::prelude::*;
use wcss_cli::config::{emit_config, parse_config, parse_with_overrides, Origin};
use wcss_core::radiation::wavelength;
use wcss_core::{
    ArrayGeometry, ArrayPose, Beam, BeamSpec, ElementPattern, FadingConfig, FadingModel, Point3, RadioParams, Scenario,
    Trajectory, WeightSource,
};

#[test]
fn empty_file_is_the_reference_scenario() {
    assert_eq!(parse_config("").unwrap(), Scenario::default());
    let s = parse_config("").unwrap();
    assert_eq!(s.radio.k, 100);
    assert_eq!(s.beams.len(), 5);
    assert_eq!(s.pose.origin(), Point3::new(0.0, 0.0, 60.0));
}

#[test]
fn element_count_shorthand() {
    let s = parse_config("array.L = 64\n").unwrap();
    assert_eq!((s.geometry.lx(), s.geometry.ly(), s.geometry.elements()), (8, 8, 64));
    let s = parse_config("array.L = 128\n").unwrap();
    assert_eq!((s.geometry.lx(), s.geometry.ly()), (16, 8));
    assert!((s.geometry.dx() - wavelength(5.2e9) / 2.0).abs() < 1e-18);
    let e = parse_config("array.L = 64\narray.Lx = 4\n").unwrap_err();
    assert_eq!(e.key, "array.L");
    assert!(parse_config("array.L = 6\n").is_err());
}

#[test]
fn errors_name_key_and_line() {
    let cases = [
        ("seed = 1\nradio.K = 0\n", "radio.K", 2),
        ("radio.K = ten\n", "radio.K", 1),
        ("\n\nbogus.key = 3\n", "bogus.key", 3),
        ("radio.p = 1 [furlongs]\n", "radio.p", 1),
        ("seed = 1\nseed = 2\n", "seed", 2),
        ("su.1 = 0, 0\n", "su.1", 1),
        ("su.1 = 0, 0, 0\nsu.3 = 1, 1, 1\n", "su.3", 2),
        ("pu.1 = 0, 0, 0 [m]\nbeam.1 = 0.1, 0.2\n", "pu.1", 1),
        ("pu.2.amplitude = 3\n", "pu.2.amplitude", 1),
        ("fading.model = rayleigh\n", "fading.model", 1),
        ("array.Lx = 3\n", "array.Lx", 1),
        ("array.boresight = 0, 0, 0\n", "array.boresight", 1),
    ];
    for (text, key, line) in cases {
        let e = parse_config(text).unwrap_err();
        assert_eq!(e.key, key, "{text:?}: {e}");
        if key != "pu.1" {
            assert_eq!(e.origin, Origin::Line(line), "{text:?}: {e}");
        }
        assert!(e.to_string().contains(key));
    }
    let e = parse_with_overrides("", &["radio.K = 0".into()]).unwrap_err();
    assert_eq!(e.origin, Origin::Override(1));
}

#[test]
fn overrides_replace_file_values() {
    let s = parse_with_overrides("seed = 3\n", &["seed = 9".into(), "fading.model = rician".into()]).unwrap();
    assert_eq!(s.seed, 9);
    assert_eq!(s.fading.model, FadingModel::Rician);
}

#[test]
fn user_and_beam_lists() {
    let text = "pu.1 = 10, 20, 0 [m]\nbeam.2 = 0.5, -1.0\nbeam.2.amplitude = 2\n\
                su.1 = 0, -100, 0; 100, -100, 0 [m]\nsu.1.speed = 5 [m/s]\nsu.2 = 30, 30, 0\n";
    let s = parse_config(text).unwrap();
    assert_eq!(s.beams.len(), 2);
    assert_eq!(s.beams[1], BeamSpec::Direction(Beam { theta: 0.5, phi: -1.0, amplitude: 2.0 }));
    assert_eq!(s.m(), 2);
    assert_eq!(s.sus[0].speed(), 5.0);
    assert!(s.sus[1].is_static());
    assert_eq!(parse_config(&emit_config(&s)).unwrap(), s);
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e4..1e4f64, -1e-6..1e-6f64, Just(0.0), Just(-0.0)]
}

fn point() -> impl Strategy<Value = Point3> {
    (finite(), finite(), finite()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-15..1e-3f64, 1e-3..1e3f64, 1e3..1e12f64]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    let pose = (point(), point().prop_filter("nonzero", |p| p.norm() > 1e-3))
        .prop_map(|(o, b)| ArrayPose::new(o, b).unwrap());
    let geometry = (1usize..5, 1usize..5, positive(), positive()).prop_flat_map(|(hx, hy, dx, dy)| {
        prop::collection::vec(0.0..3.0f64, hx * hy).prop_map(move |e| ArrayGeometry::new(2 * hx, 2 * hy, dx, dy, e).unwrap())
    });
    let beam = prop_oneof![
        (point(), positive()).prop_map(|(target, amplitude)| BeamSpec::Toward { target, amplitude }),
        (finite(), finite(), positive()).prop_map(|(theta, phi, amplitude)| BeamSpec::Direction(Beam { theta, phi, amplitude })),
    ];
    let radio = (positive(), positive(), positive(), positive(), positive(), 1usize..10_000)
        .prop_map(|(p, gain, fc, sigma_s2, sigma_n2, k)| RadioParams { p, gain, fc, sigma_s2, sigma_n2, k });
    let su = (prop::collection::vec(point(), 1..4), prop_oneof![Just(0.0), 0.0..50.0f64])
        .prop_map(|(w, v)| Trajectory::new(w, v).unwrap());
    let fading = (any::<bool>(), 0.0..100.0f64, any::<bool>()).prop_map(|(r, k, d)| FadingConfig {
        model: if r { FadingModel::Rician } else { FadingModel::Deterministic },
        rician_k: k,
        weight_source: if d { WeightSource::Deterministic } else { WeightSource::Realized },
    });
    (
        pose,
        geometry,
        any::<bool>(),
        prop::collection::vec(beam, 1..5),
        radio,
        prop::collection::vec(su, 1..6),
        fading,
        any::<u64>(),
    )
        .prop_map(|(pose, geometry, cos, beams, radio, sus, fading, seed)| Scenario {
            pose,
            geometry,
            element: if cos { ElementPattern::Cosine } else { ElementPattern::Isotropic },
            beams,
            radio,
            sus,
            fading,
            seed,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn emit_then_parse_is_exact(s in scenario()) {
        let text = emit_config(&s);
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.digest(), s.digest());
        prop_assert_eq!(emit_config(&back), text);
    }
}
