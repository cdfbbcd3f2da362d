//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treehue::color_space::{check_gamut, hcl_to_lab, hcl_to_srgb, lab_to_hcl, lab_to_srgb, srgb_to_lab};
use treehue::fixtures;
use treehue::metrics::{gamut_coverage, Evaluation};
use treehue::treecolors::{
    preset, AnalysisFocus, HierarchySize, InterpolationMode, Permutation, SplitMode, Theme,
};
use treehue::{assign_colors, Hierarchy, NodeId, PaletteAssignment, PaletteConfig, Preset, SrgbColor};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
/// Offset, shrunk width and slot width of one child.
type Child = (f64, f64, f64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn palette(h: &Hierarchy, cfg: &PaletteConfig) -> Result<PaletteAssignment, String> {
    assign_colors(h, cfg).map_err(|e| e.to_string())
}

fn entry<'a>(p: &'a PaletteAssignment, path: &str) -> &'a treehue::treecolors::PaletteEntry {
    p.entry(path).unwrap_or_else(|| panic!("no entry for {path}"))
}

fn split_widths() -> Check {
    let t = Instant::now();
    let h = fixtures::fanout_tree();
    let children = ["root/a", "root/b", "root/c"];
    for (mode, want) in [
        (SplitMode::Even, [120.0, 120.0, 120.0]),
        (SplitMode::Proportional, [60.0, 120.0, 180.0]),
    ] {
        for permute in [Permutation::None, Permutation::Interleave] {
            let cfg = PaletteConfig {
                split_mode: mode,
                permute,
                ..PaletteConfig::default()
            };
            let p = palette(&h, &cfg)?;
            for (path, w) in children.iter().zip(want) {
                let got = entry(&p, path).slot_width;
                ensure((got - w).abs() <= 1e-9, || format!("{mode:?} {path}: {got} != {w}"))?;
            }
        }
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("even 120/120/120, proportional 60/120/180 in {elapsed:?}"))
}

fn interpolation_factors() -> Check {
    let h = fixtures::uneven_tree();
    let global = palette(
        &h,
        &PaletteConfig {
            interpolation_mode: InterpolationMode::Global,
            ..PaletteConfig::default()
        },
    )?;
    let local = palette(
        &h,
        &PaletteConfig {
            interpolation_mode: InterpolationMode::Local,
            ..PaletteConfig::default()
        },
    )?;
    let third = 1.0 / 3.0;
    let two_thirds = 2.0 / 3.0;
    let expected = [
        ("root", 0.0, 0.0),
        ("root/a", third, 0.5),
        ("root/a/a1", two_thirds, 1.0),
        ("root/a/a2", two_thirds, 1.0),
        ("root/b", third, third),
        ("root/b/b1", two_thirds, two_thirds),
        ("root/b/b1/b11", 1.0, 1.0),
        ("root/c", third, 1.0),
    ];
    ensure(h.len() == expected.len(), || format!("tree has {} nodes", h.len()))?;
    for (path, g, l) in expected {
        let (gg, ll) = (entry(&global, path).factor, entry(&local, path).factor);
        ensure(gg == g, || format!("global {path}: {gg} != {g}"))?;
        ensure(ll == l, || format!("local {path}: {ll} != {l}"))?;
    }
    Ok("global {0, 1/3, 2/3, 1}, local {0, 1/2, 1, 1/3, 2/3}".into())
}

fn preset_table() -> Check {
    for p in Preset::all() {
        let c = preset(p.theme, p.size, p.focus);
        let f = match p.size {
            HierarchySize::Small => 0.75,
            HierarchySize::Larger => 0.9,
        };
        let (l, ch) = match p.theme {
            Theme::Light => ([95.0, 57.0], [10.0, 45.0]),
            Theme::Dark => ([26.0, 76.0], [20.0, 59.0]),
        };
        ensure(c.hue_fraction == f, || format!("{p}: f = {}", c.hue_fraction))?;
        ensure(c.luminance_interval == l, || format!("{p}: L = {:?}", c.luminance_interval))?;
        ensure(c.chroma_interval == ch, || format!("{p}: C = {:?}", c.chroma_interval))?;
        if p.size == HierarchySize::Larger {
            let want = match p.focus {
                AnalysisFocus::TopDown => (InterpolationMode::Global, SplitMode::Even),
                AnalysisFocus::BottomUp => (InterpolationMode::Local, SplitMode::Proportional),
            };
            let got = (c.interpolation_mode, c.split_mode);
            ensure(got == want, || format!("{p}: {got:?}"))?;
        }
    }
    Ok("8 presets".into())
}

fn random_trees(count: u64, max_depth: usize, max_nodes: usize) -> impl Iterator<Item = Hierarchy> {
    (0..count).map(move |seed| fixtures::random_tree(seed, max_depth, max_nodes))
}

fn path_uniqueness() -> Check {
    let t = Instant::now();
    let mut pairs = 0usize;
    let mut worst = f64::INFINITY;
    for h in random_trees(1_000, 6, 200) {
        for p in Preset::all() {
            let pal = palette(&h, &p.config())?;
            let ev = Evaluation::new(&h, &pal).map_err(|e| e.to_string())?;
            for node in h.nodes() {
                let mut up = node.parent;
                while let Some(a) = up {
                    let d = ev.lab(a).distance(&ev.lab(node.id));
                    worst = worst.min(d);
                    pairs += 1;
                    ensure(d > 1e-6, || format!("{p}: {} vs ancestor, dE {d}", node.path))?;
                    up = h.node(a).parent;
                }
            }
        }
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} ancestor pairs, min dE {worst:.3}, {elapsed:?}"))
}

fn leaf_equality() -> Check {
    let mut configs: Vec<PaletteConfig> = Preset::all().iter().map(Preset::config).collect();
    configs.push(PaletteConfig {
        interpolation_mode: InterpolationMode::Local,
        ..PaletteConfig::default()
    });
    let mut checked = 0;
    for h in random_trees(200, 6, 200) {
        for cfg in &configs {
            let p = palette(&h, cfg)?;
            let ev = Evaluation::new(&h, &p).map_err(|e| e.to_string())?;
            let cl = |id: NodeId| (ev.entry(id).chroma, ev.entry(id).luminance);
            match cfg.interpolation_mode {
                InterpolationMode::Local => {
                    let mut leaves = h.leaves().map(|n| cl(n.id));
                    let first = leaves.next().expect("a tree has a leaf");
                    ensure(leaves.all(|x| x == first), || "leaves differ under local".into())?;
                }
                InterpolationMode::Global => {
                    for node in h.nodes() {
                        let peer = h.nodes().iter().find(|n| n.depth == node.depth).expect("self");
                        ensure(cl(node.id) == cl(peer.id), || format!("depth {} differs", node.depth))?;
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} palettes"))
}

/// Unwraps `start` onto `[0, modulus)` measured from `origin`.
fn offset(start: f64, origin: f64, modulus: f64) -> f64 {
    let o = (start - origin).rem_euclid(modulus);
    if o > modulus - 1e-9 {
        o - modulus
    } else {
        o
    }
}

fn gap_law() -> Check {
    let mut gaps = 0usize;
    let mut worst: f64 = 0.0;
    for f in [0.75, 0.9, 1.0] {
        for mode in [SplitMode::Even, SplitMode::Proportional] {
            for recurse in [true, false] {
                for h in random_trees(60, 5, 120).chain([fixtures::fanout_tree(), fixtures::uneven_tree()]) {
                    let cfg = PaletteConfig {
                        hue_fraction: f,
                        split_mode: mode,
                        recurse_on_shrunk_range: recurse,
                        ..PaletteConfig::default()
                    };
                    let p = palette(&h, &cfg)?;
                    let ev = Evaluation::new(&h, &p).map_err(|e| e.to_string())?;
                    let modulus = p.hue_modulus();
                    for parent in h.nodes().iter().filter(|n| !n.is_leaf()) {
                        let pe = ev.entry(parent.id);
                        let (origin, circular) = if parent.depth == 0 {
                            (pe.range_start, (pe.range_width - modulus).abs() < 1e-9)
                        } else if recurse {
                            (pe.range_start, false)
                        } else {
                            (pe.slot_start, false)
                        };
                        let mut kids: Vec<Child> = parent
                            .children
                            .iter()
                            .map(|&c| {
                                let e = ev.entry(c);
                                (offset(e.range_start, origin, modulus), e.range_width, e.slot_width)
                            })
                            .collect();
                        kids.sort_by(|a, b| a.0.total_cmp(&b.0));
                        let mut adjacent: Vec<(Child, Child, f64)> =
                            kids.windows(2).map(|w| (w[0], w[1], 0.0)).collect();
                        if circular && kids.len() > 1 {
                            adjacent.push((kids[kids.len() - 1], kids[0], modulus));
                        }
                        for (a, b, wrap) in adjacent {
                            let measured = b.0 + wrap - (a.0 + a.1);
                            let expected = (1.0 - f) * (a.2 + b.2) / 2.0;
                            let err = (measured - expected).abs();
                            worst = worst.max(err);
                            gaps += 1;
                            ensure(err <= 1e-9, || {
                                format!("f={f} {mode:?} under {}: gap {measured} vs {expected}", parent.path)
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{gaps} gaps, max error {worst:.1e}"))
}

fn exclusion() -> Check {
    let in_slice = |h: f64| !(6.0..354.0).contains(&h);
    let mut hues = 0;
    for h in random_trees(200, 6, 200).chain([fixtures::fanout_tree(), fixtures::balanced(3, 3)]) {
        for base in [PaletteConfig::default(), Preset::all()[7].config()] {
            let cfg = PaletteConfig {
                excluded_slices: vec![[354.0, 6.0]],
                ..base.clone()
            };
            let p = palette(&h, &cfg)?;
            let modulus = p.hue_modulus();
            ensure(modulus == 348.0, || format!("virtual circle {modulus}"))?;
            let root = &p.nodes[0];
            ensure(root.slot_width == 348.0, || format!("root range {}", root.slot_width))?;
            let top: f64 = p.nodes.iter().filter(|e| e.depth == 1).map(|e| e.slot_width).sum();
            if h.len() > 1 {
                ensure((top - 348.0).abs() < 1e-9, || format!("level-1 slots sum to {top}"))?;
            }
            for e in &p.nodes {
                hues += 1;
                ensure(!in_slice(e.actual_hue), || format!("{} got hue {}", e.path, e.actual_hue))?;
            }
        }
    }
    Ok(format!("{hues} hues outside [354, 6), domain 348"))
}

fn permutation_conservation() -> Check {
    let strategies = [
        Permutation::None,
        Permutation::Interleave,
        Permutation::Seeded(1),
        Permutation::Seeded(0xdead_beef),
    ];
    let mut groups = 0;
    for h in random_trees(100, 6, 200) {
        for mode in [SplitMode::Even, SplitMode::Proportional] {
            let mut reference: Option<Vec<Vec<f64>>> = None;
            for s in strategies {
                let cfg = PaletteConfig {
                    permute: s,
                    split_mode: mode,
                    ..PaletteConfig::default()
                };
                let p = palette(&h, &cfg)?;
                let ev = Evaluation::new(&h, &p).map_err(|e| e.to_string())?;
                let modulus = p.hue_modulus();
                // hues relative to the parent's range start; the absolute
                // position of a deeper group moves with its parent's slot
                let sets: Vec<Vec<f64>> = h
                    .nodes()
                    .iter()
                    .filter(|n| !n.is_leaf())
                    .map(|n| {
                        let origin = ev.entry(n.id).range_start;
                        let mut v: Vec<f64> = n
                            .children
                            .iter()
                            .map(|&c| match mode {
                                SplitMode::Even => offset(ev.entry(c).hue, origin, modulus),
                                SplitMode::Proportional => ev.entry(c).slot_width,
                            })
                            .collect();
                        v.sort_by(f64::total_cmp);
                        v
                    })
                    .collect();
                match &reference {
                    None => reference = Some(sets),
                    Some(r) => {
                        for (a, b) in r.iter().zip(&sets) {
                            let same = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9);
                            ensure(same, || format!("{mode:?} {s:?}: {a:?} vs {b:?}"))?;
                            groups += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{groups} sibling groups compared"))
}

fn color_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let c = SrgbColor::new(rng.gen(), rng.gen(), rng.gen()).map_err(|e| e.to_string())?;
        let (back, inside) = lab_to_srgb(srgb_to_lab(c));
        ensure(inside, || format!("{c:?} left the gamut"))?;
        for (x, y) in c.channels().iter().zip(back.channels()) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst <= 1e-6, || format!("round trip error {worst}"))?;
    // independent evaluation of the CIE formulas (Python, float64)
    let oracle = [53.2408, 80.0925, 67.2032];
    let red = srgb_to_lab(SrgbColor::new(1.0, 0.0, 0.0).map_err(|e| e.to_string())?);
    for (got, want) in [red.l, red.a, red.b].iter().zip(oracle) {
        ensure((got - want).abs() <= 1e-2, || format!("red Lab {got} vs {want}"))?;
    }
    Ok(format!(
        "max round-trip error {worst:.1e}, red Lab ({:.4}, {:.4}, {:.4})",
        red.l, red.a, red.b
    ))
}

fn trade_off_directions() -> Check {
    let h = fixtures::fanout_tree();
    let largest = h
        .children(NodeId::ROOT)
        .max_by_key(|n| n.leaf_count)
        .expect("root has children")
        .id;
    let run = |mode| -> Result<(f64, f64), String> {
        let cfg = PaletteConfig {
            hue_fraction: 0.9,
            split_mode: mode,
            ..PaletteConfig::default()
        };
        let p = palette(&h, &cfg)?;
        let ev = Evaluation::new(&h, &p).map_err(|e| e.to_string())?;
        Ok((
            ev.sibling_group_min_delta_e(largest).ok_or("largest group has one child")?,
            ev.subtree_gap().ok_or("no subtree gap")?,
        ))
    };
    let (even_de, even_gap) = run(SplitMode::Even)?;
    let (prop_de, prop_gap) = run(SplitMode::Proportional)?;
    ensure(prop_de >= even_de, || format!("largest-group dE {prop_de} < {even_de}"))?;
    ensure(even_gap >= prop_gap, || format!("subtree gap {even_gap} < {prop_gap}"))?;
    Ok(format!(
        "largest-group dE {prop_de:.2} >= {even_de:.2}, subtree gap {even_gap:.2} >= {prop_gap:.2}"
    ))
}

fn gamut_report() -> Check {
    let h = fixtures::balanced(3, 3);
    let mut summary = Vec::new();
    for p in Preset::all() {
        let pal = palette(&h, &p.config())?;
        let g = gamut_coverage(&pal);
        ensure((0.0..=1.0).contains(&g.fraction), || format!("{p}: fraction {}", g.fraction))?;
        for e in &pal.nodes {
            let check = check_gamut(e.hcl());
            ensure(check.in_gamut == e.in_gamut, || format!("{p} {}: stale flag", e.path))?;
            if e.in_gamut {
                continue;
            }
            let (srgb, _) = hcl_to_srgb(check.clamped);
            let seen = lab_to_hcl(srgb_to_lab(srgb));
            let dh = (seen.h - e.actual_hue + 180.0).rem_euclid(360.0) - 180.0;
            ensure(dh.abs() <= 1e-3, || format!("{p} {}: hue moved {dh}", e.path))?;
            ensure((seen.l - e.luminance).abs() <= 1e-3, || format!("{p} {}: l moved", e.path))?;
            ensure(seen.c <= e.chroma && e.clamped_chroma <= e.chroma, || {
                format!("{p} {}: chroma grew", e.path)
            })?;
            let dist = hcl_to_lab(e.hcl()).distance(&hcl_to_lab(e.clamped_hcl()));
            ensure((dist - e.clamp_distance).abs() <= 1e-9, || format!("{p} {}: distance", e.path))?;
        }
        summary.push(format!("{p} {:.3}", g.fraction));
    }
    Ok(summary.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("level-1 widths by split mode", split_widths),
        ("interpolation factors", interpolation_factors),
        ("preset table", preset_table),
        ("path uniqueness", path_uniqueness),
        ("leaf equality", leaf_equality),
        ("gap law", gap_law),
        ("12 degree exclusion", exclusion),
        ("permutation conservation", permutation_conservation),
        ("color-space oracle", color_oracle),
        ("trade-off directions", trade_off_directions),
        ("gamut report", gamut_report),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
