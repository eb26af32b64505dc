"""Model memory is a closed form of the capacity parameters.

Every tree serializes to header + max_nodes * record, where the record size
depends only on dims, classes, and quantiles per sketch. The table sweeps
capacity over powers of two for two feature sizes and two class counts,
mirroring how the footprint is budgeted before deployment.
"""

from streamtree import mem_report

rows = mem_report(max_nodes_values=[2**i for i in range(8)],
                  dims_values=[3, 100],
                  classes_values=[5, 10])

widest = max(b for *_, b in rows)
print(f"{'max_nodes':>9} {'dims':>5} {'classes':>8} {'bytes':>12}")
last_combo = None
for nd, d, k, b in rows:
    if (d, k) != last_combo and last_combo is not None:
        print()
    last_combo = (d, k)
    bar = "#" * max(1, int(40 * b / widest))
    print(f"{nd:>9} {d:>5} {k:>8} {b:>12,} {bar}")

print("\nbytes grow linearly in max_nodes and with dims * classes;")
print("a 2047-node tree for D=3, K=5 needs "
      f"{mem_report([2047], [3], [5])[0][3] / 2**20:.2f} MiB")
