//! Builds each graph family, prints its summary and round-trips one through
//! the text format.

use radiocast::netgraph::{
    gen_gnp_directed, gen_lowerbound_network, gen_star_dumbbell, read_graph, write_graph,
    GraphSummary,
};

fn main() -> radiocast::Result<()> {
    let graphs = [
        ("gnp n=1024 p=0.02", gen_gnp_directed(1024, 0.02, 7)?),
        ("lowerbound n=16 D=20", gen_lowerbound_network(16, 20)?),
        ("dumbbell n=4", gen_star_dumbbell(4)?),
    ];
    for (name, g) in &graphs {
        println!("{name}: {}", GraphSummary::of(g, 0)?);
    }

    let mut text = Vec::new();
    write_graph(&graphs[2].1, &mut text)?;
    print!("{}", String::from_utf8_lossy(&text));
    let back = read_graph(text.as_slice())?;
    assert_eq!(back, graphs[2].1);
    Ok(())
}
