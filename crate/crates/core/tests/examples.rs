mod quickstart_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/quickstart.rs"
    ));
}

#[test]
fn quickstart_runs() {
    quickstart_example::run_example().expect("quickstart example should run");
}

mod rank_space_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/rank_space.rs"
    ));
}

#[test]
fn rank_space_runs() {
    rank_space_example::run_example().expect("rank_space example should run");
}

mod succinct_primitives_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/succinct_primitives.rs"
    ));
}

#[test]
fn succinct_primitives_runs() {
    succinct_primitives_example::run_example().expect("succinct_primitives example should run");
}

mod node_operations_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/node_operations.rs"
    ));
}

#[test]
fn node_operations_runs() {
    node_operations_example::run_example().expect("node_operations example should run");
}

mod decomposition_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/decomposition.rs"
    ));
}

#[test]
fn decomposition_runs() {
    decomposition_example::run_example().expect("decomposition example should run");
}

mod block_signatures_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/block_signatures.rs"
    ));
}

#[test]
fn block_signatures_runs() {
    block_signatures_example::run_example().expect("block_signatures example should run");
}

mod ball_inheritance_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/ball_inheritance.rs"
    ));
}

#[test]
fn ball_inheritance_runs() {
    ball_inheritance_example::run_example().expect("ball_inheritance example should run");
}

mod butterfly_reachability_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/butterfly_reachability.rs"
    ));
}

#[test]
fn butterfly_reachability_runs() {
    butterfly_reachability_example::run_example()
        .expect("butterfly_reachability example should run");
}

mod stabbing_corners_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/stabbing_corners.rs"
    ));
}

#[test]
fn stabbing_corners_runs() {
    stabbing_corners_example::run_example().expect("stabbing_corners example should run");
}

mod persistence_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/persistence.rs"
    ));
}

#[test]
fn persistence_runs() {
    persistence_example::run_example().expect("persistence example should run");
}

mod space_report_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/space_report.rs"
    ));
}

#[test]
fn space_report_runs() {
    space_report_example::run_example().expect("space_report example should run");
}

mod batch_queries_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/batch_queries.rs"
    ));
}

#[test]
fn batch_queries_runs() {
    batch_queries_example::run_example().expect("batch_queries example should run");
}

mod benchmark_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/benchmark.rs"
    ));
}

#[test]
fn benchmark_runs() {
    benchmark_example::run_example().expect("benchmark example should run");
}
