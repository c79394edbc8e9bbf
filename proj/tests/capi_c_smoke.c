/* Compiled as C89-compatible C to prove the public header needs no C++. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "ppreg/ppreg.h"

static int failures = 0;

static void expect(int ok, const char* what) {
  if (!ok) {
    fprintf(stderr, "FAIL: %s (last error: %s)\n", what, ppreg_last_error());
    ++failures;
  }
}

int main(void) {
  double v = 0.0;
  double data[5];
  ppreg_table* table = NULL;
  ppreg_fit* fit = NULL;
  char* json = NULL;

  expect(ppreg_trigamma(1.0, &v) == PPREG_OK, "trigamma status");
  expect(fabs(v - 1.6449340668482264) < 1e-12, "trigamma value");

  expect(ppreg_digamma(-2.0, &v) == PPREG_ERR_DOMAIN, "digamma domain");
  expect(strcmp(ppreg_status_name(PPREG_ERR_DOMAIN), "domain") == 0,
         "status name");

  expect(ppreg_sample_weibull(1.0, 2.0, 5, 123, data) == PPREG_OK, "sample");
  expect(ppreg_table_create(PPREG_DIST_WEIBULL, 5, PPREG_TABLE_EXACT,
                            PPREG_SCHEME_STANDARD, 0, 0, &table) == PPREG_OK,
         "table create");
  expect(ppreg_table_size(table) == 5, "table size");

  expect(ppreg_fit_wls(PPREG_DIST_WEIBULL, data, 5, table, &fit) == PPREG_OK,
         "fit");
  expect(ppreg_fit_beta(fit) > 0.0, "fitted shape positive");
  expect(ppreg_fit_to_json(fit, &json) == PPREG_OK, "json");
  expect(json != NULL && strstr(json, "\"dist\": \"weibull\"") != NULL,
         "json contents");

  ppreg_string_free(json);
  ppreg_fit_free(fit);
  ppreg_table_free(table);

  if (failures == 0) printf("c smoke test passed\n");
  return failures;
}
