#include <stdio.h>
#include "tgrs.h"

#define CHECK(call)                                                          \
    do {                                                                     \
        TgrsStatus s_ = (call);                                              \
        if (s_ != TGRS_STATUS_OK) {                                          \
            const char *m_ = tgrs_last_error_message();                      \
            printf("FAIL %s -> %d (%s)\n", #call, (int)s_, m_ ? m_ : "");    \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    TgrsField *f = NULL;
    CHECK(tgrs_field_new(7, 1, NULL, 0, &f));
    uint32_t alpha[6] = {1, 2, 3, 4, 5, 6};
    uint32_t b[8] = {4, 6, 5, 5, 5, 2, 4, 0};
    TgrsCode *code = NULL;
    CHECK(tgrs_code_new(f, 6, 4, alpha, NULL, b, &code));

    bool mds = false;
    size_t witness[4];
    CHECK(tgrs_code_is_mds(code, &mds, witness));
    TgrsGrsStatus st;
    CHECK(tgrs_code_grs_status(code, &st));
    size_t dim = 0;
    CHECK(tgrs_code_schur_dim(code, &dim));

    uint32_t g[24], h[12];
    CHECK(tgrs_code_generator(code, g, 24));
    CHECK(tgrs_code_parity_check(code, h, 12));
    int orthogonal = 1;
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 2; j++) {
            uint32_t acc = 0;
            for (int c = 0; c < 6; c++) acc = (acc + g[i * 6 + c] * h[j * 6 + c]) % 7;
            if (acc != 0) orthogonal = 0;
        }

    int64_t pattern[8] = {-1, -1, -1, -1, 0, 0, 0, 0};
    uint64_t count = 0;
    CHECK(tgrs_census_count(f, 6, 4, alpha, pattern, 1, TGRS_TIER_QUICK, &count));

    TgrsStatus bad = tgrs_code_new(f, 6, 6, alpha, NULL, NULL, &code);
    const char *msg = tgrs_last_error_message();

    printf("mds=%d grs=%d schur=%zu orthogonal=%d census=%llu bad=%d msg=%s\n", (int)mds, (int)st,
           dim, orthogonal, (unsigned long long)count, (int)bad, msg ? "set" : "unset");
    tgrs_code_free(code);
    tgrs_field_free(f);
    return 0;
}
