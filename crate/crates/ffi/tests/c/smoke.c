#include <stdio.h>
#include <string.h>

#include "lamination.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);     \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  char *s = NULL;
  CHECK(lam_sigma(2, "1/3", &s) == LAM_STATUS_OK);
  CHECK(strcmp(s, "2/3") == 0);
  lam_string_free(s);

  CHECK(lam_mac_to_scm(3, "1/8,3/8", &s) == LAM_STATUS_OK);
  CHECK(strcmp(s, "{1/8, 1/4, 3/8, 3/4}") == 0);
  lam_string_free(s);

  CHECK(lam_coroots(3, "1/3,2/3", &s) == LAM_STATUS_DOMAIN);
  CHECK(lam_last_error() != NULL && strstr(lam_last_error(), "MAC") != NULL);
  CHECK(lam_sigma(2, "2/4", &s) == LAM_STATUS_PARSE);
  CHECK(lam_sigma(2, NULL, &s) == LAM_STATUS_NULL_POINTER);

  LamLamination *lam = NULL;
  CHECK(lam_mac_lamination(2, "1/3,2/3", 2, &lam) == LAM_STATUS_OK);
  size_t n = 0;
  CHECK(lam_lamination_leaf_count(lam, &n) == LAM_STATUS_OK && n == 4);
  CHECK(lam_lamination_svg(lam, 300, &s) == LAM_STATUS_OK);
  CHECK(strncmp(s, "<svg", 4) == 0);
  lam_string_free(s);
  lam_lamination_free(lam);

  puts("ok");
  return 0;
}
