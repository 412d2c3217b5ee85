use std::path::PathBuf;

use arbortile::cli::run;
use arbortile::graph::io::emit_edge_list;
use arbortile::Graph;
use serde_json::Value;

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Dir {
        let p = std::env::temp_dir().join(format!("arbortile-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        Dir(p)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn graph(&self, name: &str, g: &Graph) -> String {
        self.write(name, &emit_edge_list(g))
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn call(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("arbortile").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn documented_invocations() {
    let d = Dir::new("doc");
    let k334 = d.graph("k334.el", &arbortile::graph::complete_multipartite(&[3, 3, 4]).unwrap());
    let k3 = d.graph("k3.el", &Graph::complete(3));
    let k6 = d.graph("k6.el", &Graph::complete(6));
    let k7k5 = d.graph("k7k5.el", &Graph::disjoint_union(&[&Graph::complete(7), &Graph::complete(5)]));

    let (code, out) = call(&["invariants", &k334]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["result"]["f"], 5);
    assert_eq!(v["result"]["ar_cr"], "20/9");
    assert_eq!(v["config"]["caps"]["factor_host"], 60);

    let (code, out) = call(&["factor", "--host", &k6, "--pattern", &k3]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["certificate"]["copies"].as_array().unwrap().len(), 2);
    assert_eq!(call(&["factor", "--host", &k7k5, "--pattern", &k3]).0, 1);
    assert_eq!(call(&["factor", "--host", &k7k5, "--pattern", &k3, "--max-tiling"]).0, 0);
}

#[test]
fn construction_commands() {
    let d = Dir::new("build");
    let k3 = d.graph("k3.el", &Graph::complete(3));
    let k4 = d.graph("k4.el", &Graph::complete(4));
    let q_out = d.0.join("q.el");
    let (code, out) = call(&["qbuild", "--pattern", &k4, "--a", "2", "--b", "1", "--graph-out", q_out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["verification"]["valid"], true);
    assert!(std::fs::read_to_string(&q_out).unwrap().starts_with("16\n"));
    assert_eq!(call(&["qbuild", "--pattern", &k4, "--a", "1", "--b", "1"]).0, 2);

    let mg = d.write("r.txt", "3\n0 1 2\n1 2 2\n0 2 2\n");
    let (code, out) = call(&["fractile", "--multigraph", &mg, "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["lp"]["value"], "3/1");

    let host = d.graph("host.el", &arbortile::graph::complete_multipartite(&[20, 20, 20]).unwrap());
    let clusters = d.write("clusters.json", &serde_json::to_string(&(0..3).map(|i| (20 * i..20 * (i + 1)).collect::<Vec<_>>()).collect::<Vec<_>>()).unwrap());
    let (code, out) = call(&["reduce", "--host", &host, "--clusters", &clusters, "--pattern", &k3]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["min_degree"], 4);
    let (code, out) = call(&["pipeline", "--host", &host, "--clusters", &clusters, "--pattern", &k3]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["verified"], true);
    let (code, out) = call(&["embed-q", "--host", &host, "--clusters", &clusters, "--pattern", &k3, "--a", "3", "--b", "0"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["map"].as_array().unwrap().len(), 6);
}

#[test]
fn extremal_output_is_deterministic() {
    let d = Dir::new("ext");
    let k3 = d.graph("k3.el", &Graph::complete(3));
    let args = ["extremal", "--family", "space-barrier", "--pattern", &k3, "--n", "30", "--alpha", "1/3", "--seed", "9"];
    let (code, first) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(call(&args).1, first);
    let v = json(&first);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["result"]["certificate"]["kind"], "size-counting");
    let (_, other) = call(&["extremal", "--family", "space-barrier", "--pattern", &k3, "--n", "30", "--alpha", "1/3", "--seed", "10"]);
    assert_ne!(other, first);
}

#[test]
fn caps_and_outputs() {
    let d = Dir::new("caps");
    let k3 = d.graph("k3.el", &Graph::complete(3));
    let k30 = d.graph("k30.el", &Graph::complete(30));
    let (code, out) = call(&["--caps", "factor_host=10", "factor", "--host", &k30, "--pattern", &k3]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["config"]["caps"]["factor_host"], 10);
    assert_eq!(call(&["--caps", "nonsense=1", "invariants", &k3]).0, 2);

    let target = d.0.join("out.json");
    let (code, out) = call(&["--output", target.to_str().unwrap(), "absorb", "--host", &k30, "--pattern", &k3, "connector", "--u", "0", "--v", "1"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v = json(&std::fs::read_to_string(&target).unwrap());
    assert_eq!(v["result"]["connector"]["s_set"].as_array().unwrap().len(), 2);

    let (code, out) = call(&["--format", "text", "invariants", &k3]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "f: 3"));
}
