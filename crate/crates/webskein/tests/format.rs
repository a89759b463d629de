use proptest::prelude::*;
use webskein::format::{parse_diagram, render};
use webskein_core::braiding::Sign;
use webskein_core::ladder::{LadderDiagram, Layer};

fn layer(m: usize, n: u32, annular: bool) -> impl Strategy<Value = Layer> {
    let linear = prop_oneof![
        (1..m, 0..=n).prop_map(|(i, k)| Layer::RungE(i, k)),
        (1..m, 0..=n).prop_map(|(i, k)| Layer::RungF(i, k)),
        (1..m).prop_map(|i| Layer::Crossing(i, Sign::Pos)),
        (1..m).prop_map(|i| Layer::Crossing(i, Sign::Neg)),
        (1..=m, -3i32..=3).prop_map(|(i, h)| Layer::Twist(i, h)),
    ];
    let affine = prop_oneof![
        (0..=n).prop_map(Layer::RungE0),
        (0..=n).prop_map(Layer::RungF0),
        prop_oneof![Just(1i8), Just(-1i8)].prop_map(Layer::Rot),
    ];
    if annular {
        prop_oneof![3 => linear, 1 => affine].boxed()
    } else {
        linear.boxed()
    }
}

fn diagram() -> impl Strategy<Value = LadderDiagram> {
    (1u32..=4, 2usize..=5, prop::bool::ANY).prop_flat_map(|(n, m, annular)| {
        (prop::collection::vec(0..=n as i32, m), prop::collection::vec(layer(m, n, annular), 0..8)).prop_map(
            move |(src, layers)| {
                if annular {
                    LadderDiagram::annular(n, src, layers)
                } else {
                    LadderDiagram::new(n, src, layers)
                }
            },
        )
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(d in diagram()) {
        let text = render(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(render(&back), text);
    }
}

#[test]
fn shipped_diagrams_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("diagrams");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        parse_diagram(&text).unwrap();
        count += 1;
    }
    assert!(count >= 5);
}
