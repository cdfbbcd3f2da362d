use proptest::prelude::*;

use crate::hierarchy::NodeSpec;

/// Trees with unique names, up to `depth` levels below the root and
/// `branching` children per node.
pub fn arb_spec(depth: u32, branching: usize) -> impl Strategy<Value = NodeSpec> {
    let leaf = Just(Vec::<NodeSpec>::new()).prop_map(|c| NodeSpec::new("x", c));
    leaf.prop_recursive(depth, 256, branching as u32, move |inner| {
        prop::collection::vec(inner, 0..=branching).prop_map(|c| NodeSpec::new("x", c))
    })
    .prop_map(|mut spec| {
        fn rename(spec: &mut NodeSpec, next: &mut usize) {
            spec.name = format!("n{next}");
            *next += 1;
            for c in &mut spec.children {
                rename(c, next);
            }
        }
        let mut next = 0;
        rename(&mut spec, &mut next);
        spec
    })
}
