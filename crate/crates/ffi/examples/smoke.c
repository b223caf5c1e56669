/* cc smoke.c -I../include -L../../../target/debug -l:libcontextlab_ffi.a -lm -lpthread -ldl */
#include <stdio.h>
#include "contextlab.h"

int main(void) {
    CtxGraph *g = NULL;
    if (ctx_graph_cycle(5, &g) != CTX_STATUS_OK) return 1;

    bool perfect = true;
    CtxHoleKind kind = CTX_HOLE_KIND_NONE;
    size_t witness[8], len = 0;
    ctx_graph_is_perfect(g, &perfect, &kind, witness, 8, &len);
    printf("C5 perfect=%d kind=%d length=%zu\n", perfect, kind, len);

    double p[5], theta = 0.0;
    ctx_umbrella_marginals(5, p, 5);
    ctx_theta(CTX_HOLE_KIND_HOLE, 5, &theta);
    printf("umbrella p1=%.9f theta=%.9f\n", p[0], theta);

    CtxStatus s = ctx_graph_new(2, (const size_t[]){1, 1}, 1, &g);
    char msg[128];
    ctx_last_error_message(msg, sizeof msg, &len);
    printf("self-loop status=%d: %s\n", s, msg);

    ctx_graph_free(g);
    return 0;
}
