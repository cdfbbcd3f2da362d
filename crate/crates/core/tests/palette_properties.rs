use proptest::prelude::*;

use treehue::fixtures;
use treehue::hierarchy::{parse_nested_json, NodeSpec};
use treehue::metrics::{default_background_l, evaluate, Evaluation, ReportOptions};
use treehue::treecolors::{InterpolationMode, Permutation, SizeWeight, SplitMode};
use treehue::{assign_colors, Hierarchy, PaletteAssignment, PaletteConfig, Preset};

fn arb_tree() -> impl Strategy<Value = Hierarchy> {
    (any::<u64>(), 1usize..7, 1usize..150).prop_map(|(seed, depth, nodes)| fixtures::random_tree(seed, depth, nodes))
}

fn arb_config() -> impl Strategy<Value = PaletteConfig> {
    (
        prop_oneof![Just(0.75), Just(0.9), Just(1.0), 0.3f64..1.0],
        any::<bool>(),
        any::<bool>(),
        prop_oneof![
            Just(Permutation::None),
            Just(Permutation::Interleave),
            any::<u64>().prop_map(Permutation::Seeded)
        ],
        any::<bool>(),
        any::<bool>(),
        0usize..8,
    )
        .prop_map(|(f, proportional, local, permute, recurse, nodes, preset)| PaletteConfig {
            hue_fraction: f,
            split_mode: if proportional { SplitMode::Proportional } else { SplitMode::Even },
            interpolation_mode: if local { InterpolationMode::Local } else { InterpolationMode::Global },
            permute,
            recurse_on_shrunk_range: recurse,
            weight: if nodes { SizeWeight::NodeCount } else { SizeWeight::LeafCount },
            ..Preset::all()[preset].config()
        })
}

fn unwrap_from(x: f64, origin: f64, modulus: f64) -> f64 {
    let o = (x - origin).rem_euclid(modulus);
    if o > modulus - 1e-9 {
        o - modulus
    } else {
        o
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn deterministic(h in arb_tree(), cfg in arb_config()) {
        let a = assign_colors(&h, &cfg).unwrap();
        let b = assign_colors(&h, &cfg).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(PaletteAssignment::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn one_entry_per_node_in_pre_order(h in arb_tree(), cfg in arb_config()) {
        let p = assign_colors(&h, &cfg).unwrap();
        let paths: Vec<&str> = p.nodes.iter().map(|e| e.path.as_str()).collect();
        let expected: Vec<&str> = h.nodes().iter().map(|n| n.path.as_str()).collect();
        prop_assert_eq!(paths, expected);
        for e in &p.nodes {
            prop_assert!((0.0..360.0).contains(&e.actual_hue));
            prop_assert_eq!(e.hex.len(), 7);
        }
    }

    #[test]
    fn path_colors_distinct(h in arb_tree(), cfg in arb_config()) {
        let p = assign_colors(&h, &cfg).unwrap();
        let ev = Evaluation::new(&h, &p).unwrap();
        for node in h.nodes() {
            let mut up = node.parent;
            while let Some(a) = up {
                prop_assert!(ev.lab(a).distance(&ev.lab(node.id)) > 1e-6);
                prop_assert!(ev.entry(a).factor < ev.entry(node.id).factor);
                up = h.node(a).parent;
            }
        }
    }

    #[test]
    fn proportional_widths(h in arb_tree(), cfg in arb_config()) {
        let cfg = PaletteConfig { split_mode: SplitMode::Proportional, ..cfg };
        let p = assign_colors(&h, &cfg).unwrap();
        let ev = Evaluation::new(&h, &p).unwrap();
        for parent in h.nodes().iter().filter(|n| !n.is_leaf()) {
            let base = if parent.depth == 0 || cfg.recurse_on_shrunk_range {
                ev.entry(parent.id).range_width
            } else {
                ev.entry(parent.id).slot_width
            };
            let size = |id| {
                let n = h.node(id);
                match cfg.weight {
                    SizeWeight::LeafCount => n.leaf_count,
                    SizeWeight::NodeCount => n.node_count,
                }
            };
            let total: usize = parent.children.iter().map(|&c| size(c)).sum();
            for &c in &parent.children {
                let share = ev.entry(c).slot_width / base;
                let want = size(c) as f64 / total as f64;
                prop_assert!((share - want).abs() <= 1e-12, "{} vs {}", share, want);
            }
        }
    }

    #[test]
    fn shrunk_range_inside_parent_range(h in arb_tree(), cfg in arb_config()) {
        let cfg = PaletteConfig { recurse_on_shrunk_range: true, ..cfg };
        let p = assign_colors(&h, &cfg).unwrap();
        let ev = Evaluation::new(&h, &p).unwrap();
        let modulus = p.hue_modulus();
        for node in h.nodes().iter().filter(|n| n.depth > 0) {
            let parent = ev.entry(node.parent.unwrap());
            let e = ev.entry(node.id);
            let start = unwrap_from(e.range_start, parent.range_start, modulus);
            prop_assert!(start >= -1e-9);
            prop_assert!(start + e.range_width <= parent.range_width + 1e-9);
            let hue = unwrap_from(e.hue, parent.range_start, modulus);
            prop_assert!(hue >= -1e-9 && hue <= parent.range_width + 1e-9);
        }
    }

    #[test]
    fn level_and_leaf_equality(h in arb_tree(), cfg in arb_config()) {
        let p = assign_colors(&h, &cfg).unwrap();
        let ev = Evaluation::new(&h, &p).unwrap();
        let cl = |id| (ev.entry(id).chroma, ev.entry(id).luminance);
        match cfg.interpolation_mode {
            InterpolationMode::Local => {
                let first = h.leaves().next().unwrap().id;
                for leaf in h.leaves() {
                    prop_assert_eq!(ev.entry(leaf.id).factor, 1.0f64.min(h.max_depth() as f64));
                    prop_assert_eq!(cl(leaf.id), cl(first));
                }
            }
            InterpolationMode::Global => {
                for a in h.nodes() {
                    for b in h.nodes().iter().filter(|b| b.depth == a.depth) {
                        prop_assert_eq!(cl(a.id), cl(b.id));
                    }
                }
            }
        }
    }

    #[test]
    fn excluded_slices_stay_empty(
        h in arb_tree(),
        cfg in arb_config(),
        start in 0.0f64..360.0,
        width in 1.0f64..60.0,
        second in 0.0f64..360.0,
    ) {
        let mut slices = vec![[start, (start + width) % 360.0]];
        let other = [second, (second + 10.0) % 360.0];
        let overlaps = |a: [f64; 2], b: [f64; 2]| {
            let d = (b[0] - a[0]).rem_euclid(360.0);
            d < width || (a[0] - b[0]).rem_euclid(360.0) < 10.0
        };
        if !overlaps(slices[0], other) {
            slices.push(other);
        }
        let cfg = PaletteConfig { excluded_slices: slices.clone(), ..cfg };
        let p = assign_colors(&h, &cfg).unwrap();
        let excluded: f64 = slices.iter().map(|s| (s[1] - s[0]).rem_euclid(360.0)).sum();
        prop_assert!((p.hue_modulus() - (360.0 - excluded)).abs() < 1e-9);
        for e in &p.nodes {
            for s in &slices {
                let inside = (e.actual_hue - s[0]).rem_euclid(360.0) < (s[1] - s[0]).rem_euclid(360.0);
                prop_assert!(!inside, "{} in {:?}", e.actual_hue, s);
            }
        }
    }

    #[test]
    fn even_split_conserves_sibling_hues(h in arb_tree(), a in any::<u64>(), b in any::<u64>()) {
        let run = |permute| {
            let cfg = PaletteConfig { permute, ..PaletteConfig::default() };
            let p = assign_colors(&h, &cfg).unwrap();
            let modulus = p.hue_modulus();
            let ev = Evaluation::new(&h, &p).unwrap();
            h.nodes()
                .iter()
                .filter(|n| !n.is_leaf())
                .map(|n| {
                    let origin = ev.entry(n.id).range_start;
                    let mut v: Vec<f64> = n
                        .children
                        .iter()
                        .map(|&c| unwrap_from(ev.entry(c).hue, origin, modulus))
                        .collect();
                    v.sort_by(f64::total_cmp);
                    v
                })
                .collect::<Vec<_>>()
        };
        let base = run(Permutation::None);
        for other in [run(Permutation::Interleave), run(Permutation::Seeded(a)), run(Permutation::Seeded(b))] {
            for (x, y) in base.iter().zip(&other) {
                prop_assert_eq!(x.len(), y.len());
                for (p, q) in x.iter().zip(y) {
                    prop_assert!((p - q).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn json_tree_round_trip_keeps_palette(h in arb_tree(), cfg in arb_config()) {
        let again = parse_nested_json(&h.to_json()).unwrap();
        prop_assert_eq!(assign_colors(&h, &cfg).unwrap(), assign_colors(&again, &cfg).unwrap());
    }
}

#[test]
fn parent_child_pairs_closer_than_the_rest() {
    let h = fixtures::balanced(3, 3);
    for preset in Preset::all() {
        let p = assign_colors(&h, &preset.config()).unwrap();
        let gap = Evaluation::new(&h, &p).unwrap().parent_child_gap().unwrap();
        assert!(
            gap.parent_child_mean < gap.non_adjacent_mean,
            "{preset}: {} vs {}",
            gap.parent_child_mean,
            gap.non_adjacent_mean
        );
    }
}

#[test]
fn large_tree_metrics_sample_deterministically() {
    let spec: NodeSpec = fixtures::sized_spec(3, 10, 6_000);
    let h = Hierarchy::from_spec(&spec).unwrap();
    let cfg = Preset::all()[3].config();
    let p = assign_colors(&h, &cfg).unwrap();
    let opts = ReportOptions {
        background_l: default_background_l(&cfg),
        ..ReportOptions::default()
    };
    let a = evaluate(&h, &p, &opts).unwrap();
    assert!(a.sampled);
    assert_eq!(a, evaluate(&h, &p, &opts).unwrap());
    assert_eq!(a.order_violations, 0);
}
