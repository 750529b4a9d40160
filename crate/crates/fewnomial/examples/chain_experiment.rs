use fewnomial::oracle::tetranomial_blowup;
fn main() {
    let ks: Vec<usize> = (3..=50u64).map(|d| tetranomial_blowup(d).chain_k).collect();
    println!("K(3..50) = {ks:?}");
}
