/* Build: cc smoke.c -I../include ../../../target/debug/libpic_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "pic.h"

int main(void) {
    PicGraph *g = NULL;
    PicScheme *s = NULL;
    char *text = NULL;
    size_t witness[2] = {0, 0};
    int fails = 0;

    if (pic_graph_from_json("{\"n\":3,\"side_info\":[[2],[3],[1]]}", &g) != PIC_STATUS_OK) {
        fprintf(stderr, "graph: %s\n", pic_last_error());
        return 2;
    }
    if (pic_is_feasible(g, "110,101,011", witness) != PIC_STATUS_OK) fails++;
    if (pic_is_feasible(g, "110", witness) != PIC_STATUS_NO) fails++;
    printf("witness %zu %zu\n", witness[0], witness[1]);

    if (pic_canonical_scheme(g, "110,101,011", &s) != PIC_STATUS_OK) fails++;
    if (pic_verify_private(s, g, &text) != PIC_STATUS_OK) fails++;
    printf("verdict %s\n", text);
    pic_string_free(text);
    if (pic_oracle_check_private(s, g, 0) != PIC_STATUS_OK) fails++;

    if (pic_multicast_min_sessions(g, &text) != PIC_STATUS_OK) fails++;
    printf("kappa %s\n", text);
    pic_string_free(text);

    if (pic_graph_from_json("{\"n\":2}", &g) != PIC_STATUS_PARSE) fails++;
    printf("error %s\n", pic_last_error());

    pic_scheme_free(s);
    pic_graph_free(g);
    printf("%s\n", fails ? "FAIL" : "ok");
    return fails != 0;
}
