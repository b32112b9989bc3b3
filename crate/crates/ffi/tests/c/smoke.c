#include <stdio.h>
#include "seedopt.h"

int main(void) {
    uint32_t tails[] = {0, 0, 0, 0};
    uint32_t heads[] = {1, 2, 3, 4};
    double probs[] = {1.0, 1.0, 1.0, 1.0};
    SeedoptGraph *g = NULL;
    if (seedopt_graph_from_arcs(5, tails, heads, probs, 4, &g) != SEEDOPT_STATUS_OK) return 1;

    uint32_t seeds[8];
    size_t len = 0;
    double cov = 0.0;
    bool feasible = false;
    SeedoptStatus st = seedopt_greedy_mintss(g, SEEDOPT_MODEL_IC, 5.0, 0.5, -1, 10, 7, false, seeds, 8, &len,
                                             &cov, &feasible);
    if (st != SEEDOPT_STATUS_OK || len != 1 || seeds[0] != 0 || !feasible) return 2;

    uint32_t bad = 99;
    double mean, se;
    st = seedopt_estimate_spread(g, SEEDOPT_MODEL_IC, &bad, 1, -1, 10, 0, &mean, &se);
    if (st != SEEDOPT_STATUS_INVALID_ARGUMENT || seedopt_last_error_message() == NULL) return 3;

    printf("%zu %.1f %s\n", seedopt_graph_node_count(g), cov, seedopt_last_error_message());
    seedopt_graph_free(g);
    return 0;
}
