// Copyright 2026 The MorphKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MORPHKIT_MORPHKIT_H_
#define MORPHKIT_MORPHKIT_H_

/* C interface to the MorphKit toolkit.
 *
 * Every fallible call returns an mk_status. On failure the message is
 * available from mk_last_error() on the same thread until the next call
 * that fails. Objects are opaque and owned by the caller, who releases them
 * with the matching destroy function. Strings returned through char** are
 * released with mk_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MORPHKIT_API __declspec(dllexport)
#else
#define MORPHKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the command-line tool. */
typedef enum mk_status {
  MK_OK = 0,
  MK_USAGE_ERROR = 1,
  MK_DATA_ERROR = 2,
  MK_NUMERIC_ERROR = 3,
  MK_INTERNAL_ERROR = 4
} mk_status;

MORPHKIT_API const char* mk_version(void);
MORPHKIT_API const char* mk_last_error(void);
MORPHKIT_API void mk_string_free(char* text);

/* Ordered key=value settings. Later values for the same key win. */
typedef struct mk_options mk_options;

MORPHKIT_API mk_status mk_options_create(mk_options** out);
MORPHKIT_API void mk_options_destroy(mk_options* options);
MORPHKIT_API mk_status mk_options_set(mk_options* options, const char* key, const char* value);
/* Removes every entry for key. *out receives the last value, or NULL when
 * the key was absent; free it with mk_string_free. */
MORPHKIT_API mk_status mk_options_take(mk_options* options, const char* key, char** out);
/* Flat UTF-8 file of key=value lines; '#' starts a comment. */
MORPHKIT_API mk_status mk_options_load_file(mk_options* options, const char* path);

/* ---- tagger and parser ---- */

typedef struct mk_tagger mk_tagger;

/* Paths; NULL means absent. Only train_path is required. */
typedef struct mk_tagger_files {
  const char* train_path;
  const char* dev_path;
  const char* word_embeddings_path;
  const char* contextual_a_path;
  const char* contextual_b_path;
  const char* dev_contextual_a_path;
  const char* dev_contextual_b_path;
  const char* dictionary_path;
} mk_tagger_files;

/* Options are configuration keys such as "mode", "epochs" or "seed". */
MORPHKIT_API mk_status mk_tagger_train(const mk_tagger_files* files, const mk_options* options, mk_tagger** out);
MORPHKIT_API mk_status mk_tagger_load(const char* path, mk_tagger** out);
MORPHKIT_API mk_status mk_tagger_save(const mk_tagger* model, const char* path);
MORPHKIT_API void mk_tagger_destroy(mk_tagger* model);
MORPHKIT_API mk_status mk_tagger_parameter_count(const mk_tagger* model, size_t* out);
/* Mode name as accepted by the "mode" option. Owned by the model. */
MORPHKIT_API const char* mk_tagger_mode(const mk_tagger* model);

typedef struct mk_predict_files {
  const char* input_path;
  const char* output_path;
  const char* contextual_a_path;
  const char* contextual_b_path;
  const char* dictionary_path;
} mk_predict_files;

MORPHKIT_API mk_status mk_tagger_predict_file(const mk_tagger* model, const mk_predict_files* files);
/* In-memory CoNLL-U variant without extra inputs. */
MORPHKIT_API mk_status mk_tagger_predict_text(const mk_tagger* model, const char* conllu, const char* dictionary_path,
                                              char** out);

/* ---- evaluation ---- */

typedef struct mk_score {
  uint64_t correct;
  uint64_t total;
  uint64_t system_total;
} mk_score;

typedef struct mk_metrics {
  mk_score upos, xpos, ufeats, lemmas, uas, las, mlas, blex;
} mk_metrics;

typedef enum mk_lemma_mode { MK_LEMMAS_UD = 0, MK_LEMMAS_PDT = 1 } mk_lemma_mode;

MORPHKIT_API mk_status mk_evaluate_files(const char* gold_path, const char* system_path, mk_lemma_mode mode,
                                         mk_metrics* out);

/* TSV of form, lemma and serialized rule for every word of a CoNLL-U file. */
MORPHKIT_API mk_status mk_rules_dump_file(const char* conllu_path, char** out);

/* ---- nested named entities ---- */

typedef struct mk_ner mk_ner;

typedef struct mk_ner_files {
  const char* train_path;
  const char* entities_path;
  const char* dev_path;
  const char* dev_entities_path;
  const char* word_embeddings_path;
  const char* contextual_a_path;
  const char* contextual_b_path;
  const char* dev_contextual_a_path;
  const char* dev_contextual_b_path;
} mk_ner_files;

MORPHKIT_API mk_status mk_ner_train(const mk_ner_files* files, const mk_options* options, mk_ner** out);
MORPHKIT_API mk_status mk_ner_load(const char* path, mk_ner** out);
MORPHKIT_API mk_status mk_ner_save(const mk_ner* model, const char* path);
MORPHKIT_API void mk_ner_destroy(mk_ner* model);
/* Writes an entity file; dictionary_path is ignored. */
MORPHKIT_API mk_status mk_ner_predict_file(const mk_ner* model, const mk_predict_files* files);

typedef enum mk_ner_level { MK_NER_TYPES = 0, MK_NER_SUPERTYPES = 1 } mk_ner_level;

typedef struct mk_prf {
  uint64_t correct;
  uint64_t gold;
  uint64_t predicted;
  double precision; /* percent */
  double recall;
  double f1;
} mk_prf;

/* classes_path and supertype_map_path may be NULL. */
MORPHKIT_API mk_status mk_ner_evaluate_files(const char* gold_path, const char* system_path, mk_ner_level level,
                                             const char* classes_path, const char* supertype_map_path, mk_prf* out);

#ifdef __cplusplus
}
#endif

#endif  // MORPHKIT_MORPHKIT_H_
